#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "boundary_lab/density.hpp"
#include "boundary_lab/report.hpp"
#include "boundary_lab/step_function.hpp"

namespace boundary_lab {

// A bounded function on pairs, piecewise constant on products of cylinders:
// the first variable runs over the leaves of an outer partition and each leaf
// carries a step function of the second variable.
class KernelStep {
 public:
  using RowProbe = std::function<std::optional<StepFunction>(std::span<const Letter>)>;

  static KernelStep constant(const GroupModel& model, double value);
  // value on [u] x [v], zero elsewhere.
  static KernelStep rectangle(const GroupModel& model, const Cylinder& u, const Cylinder& v,
                              double value = 1.0);
  // K(xi, eta) = phi(xi).
  static KernelStep from_left(const GroupModel& model, const StepFunction& phi);
  static KernelStep build(const GroupModel& model, const RowProbe& probe,
                          std::size_t max_depth = 64);

  double at(const BoundaryPoint& xi, const BoundaryPoint& eta) const;
  // Outer leaves with their rows, in lexicographic order.
  std::vector<std::pair<std::vector<Letter>, const StepFunction*>> rows() const;
  double sup_abs() const;
  bool nonnegative() const;
  // Largest (xi, eta) over the support, +inf when the support reaches the
  // diagonal.
  double support_reach(const GroupModel& model) const;

 private:
  KernelStep(StepFunction index, std::vector<StepFunction> rows)
      : index_(std::move(index)), rows_(std::move(rows)) {}

  StepFunction index_;  // leaf value = row number
  std::vector<StepFunction> rows_;
};

// (T_K f)(xi) = integral of K(xi, eta) f(eta) d mu(eta).
StepFunction kernel_apply(const ConformalDensity& density, const KernelStep& K,
                          const StepFunction& f);
// <T_K phi, psi>.
double kernel_pairing(const ConformalDensity& density, const KernelStep& K,
                      const StepFunction& phi, const StepFunction& psi);
// Integral of K against mu x mu.
double kernel_mass(const ConformalDensity& density, const KernelStep& K);

struct NetFamily {
  double R = 0.0;
  double alpha = 0.0;
  double C = 0.0;
  double sigma0 = 0.0;
  std::vector<ReducedWord> members;
  std::vector<Cylinder> shadows;
};

// Greedy C-separated subset of A_R(alpha) taken in order of |wlen - R| then
// length-lex, with exact separation and covering checks. Throws
// std::invalid_argument if the annulus is empty or the shadows miss part of
// the boundary.
NetFamily build_net(const GroupModel& model, double R, double alpha, double C, double sigma0,
                    std::size_t cap);
bool shadows_cover(const GroupModel& model, const std::vector<Cylinder>& shadows);

struct SrParameters {
  double R = 4.0;
  double alpha = 1.5;
  double C = 1.5;
  double tau_prime = 2.0;
  double sigma0 = 1.5;
  std::size_t cap = 50'000'000;
  int threads = 1;
  // Depth of the cylinder basis on which <S_R 1_u, 1_v> is tabulated.
  int basis_depth = 2;
};

// S_R = sum over (g, h) in F^2 of w_{g,h} sum over k in U_{g,h} of pi~(k).
class SrOperator {
 public:
  // Throws InvariantViolation when some U_{g,h} is empty.
  static SrOperator build(const ConformalDensity& density, const KernelStep& K,
                          const SrParameters& params);

  const SrParameters& parameters() const { return params_; }
  std::size_t net_size() const { return net_size_; }
  std::size_t pair_count() const { return pair_count_; }
  std::size_t weighted_pairs() const { return weighted_pairs_; }
  std::size_t term_count() const { return weights_.size(); }
  std::size_t empty_u_count() const { return empty_u_; }
  std::size_t min_u_size() const { return min_u_; }
  std::size_t max_u_size() const { return max_u_; }
  // Elements k that lie in more than one U_{g,h}, and the number of pairs
  // involved in some overlap.
  std::size_t shared_elements() const { return shared_elements_; }
  std::size_t overlapping_pairs() const { return overlapping_pairs_; }
  bool u_sets_disjoint() const { return shared_elements_ == 0; }
  const std::string& overlap_witness() const { return overlap_witness_; }

  // sup of S_R 1 and of S_R^* 1.
  double sup_s1() const { return sup_s1_; }
  double sup_sstar1() const { return sup_sstar1_; }
  // <S_R 1, 1>.
  double pairing_one() const { return pairing_one_; }
  // <S_R phi, psi> for phi, psi measurable on the depth-d basis.
  double pairing(const StepFunction& phi, const StepFunction& psi) const;
  // <S_R phi, psi> by summing every term; any step functions.
  double pairing_exact(const StepFunction& phi, const StepFunction& psi) const;
  // Largest ||P_d S_R x|| / ||x|| over random unit x in the depth-d basis.
  double monte_carlo_norm(std::size_t trials, std::uint64_t seed) const;

 private:
  SrOperator(const ConformalDensity& density, SrParameters params)
      : density_(&density), params_(params) {}

  const ConformalDensity* density_;
  SrParameters params_;
  std::size_t net_size_ = 0;
  std::size_t pair_count_ = 0;
  std::size_t weighted_pairs_ = 0;
  std::size_t empty_u_ = 0;
  std::size_t min_u_ = 0;
  std::size_t max_u_ = 0;
  std::size_t shared_elements_ = 0;
  std::size_t overlapping_pairs_ = 0;
  std::string overlap_witness_;
  // Terms k with coefficient w_{g,h} / ||P_k||_1, letters stored back to back.
  std::vector<Letter> term_letters_;
  std::vector<std::uint32_t> term_offsets_;
  std::vector<double> weights_;
  double sup_s1_ = 0.0;
  double sup_sstar1_ = 0.0;
  double pairing_one_ = 0.0;
  std::vector<std::vector<Letter>> basis_;
  std::vector<double> basis_mass_;
  std::vector<double> block_;  // block_[v * n + u] = <S_R 1_u, 1_v>
};

// Runs S_R over a range of R; one row per R for both convergence and norms.
struct SrSweep {
  ExperimentReport convergence;
  ExperimentReport norms;
};
SrSweep sr_sweep(const ConformalDensity& density, const KernelStep& K, const SrParameters& base,
                 const std::vector<double>& radii, std::size_t mc_trials, std::uint64_t seed);

// The averaging kernel K_rho(xi, eta) = 1_E(xi) 1{d(xi, eta) < rho} / mu(B_rho(xi)).
KernelStep projection_kernel(const ConformalDensity& density, const StepFunction& E, double rho);
// Row and column integrals of |K|, for the Schur bound.
double kernel_row_sup(const ConformalDensity& density, const KernelStep& K);
double kernel_column_sup(const ConformalDensity& density, const KernelStep& K);

ExperimentReport projection_approx_report(const ConformalDensity& density, const StepFunction& E,
                                          const std::vector<StepFunction>& tests,
                                          const std::vector<double>& rho_grid);

}  // namespace boundary_lab
