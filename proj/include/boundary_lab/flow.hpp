#pragma once

#include <cstdint>
#include <vector>

#include "boundary_lab/kernels.hpp"
#include "boundary_lab/report.hpp"

namespace boundary_lab {

// sigma(g, xi) = 2 (g^-1, xi) - |g|.
double sigma(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi);
// (1/h) ln of the derivative of g^-1_* mu, read off from cylinder masses.
double rho(const ConformalDensity& density, const ReducedWord& g, const BoundaryPoint& xi);
// tau(g, xi, eta) = (g^-1, eta) - (g^-1, xi). Throws when xi == eta.
double tau(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi,
           const BoundaryPoint& eta);

// A pair of cylinders, neither a prefix of the other.
struct ProductCylinder {
  Cylinder u;
  Cylinder v;
};

// e^{2h (xi, eta)} mu([u]) mu([v]). Throws for nested cylinders.
double bms_mass(const ConformalDensity& density, const ProductCylinder& pc);
// Mass of g.([u] x [v]), split until every piece maps to a pair of cylinders.
// `pieces` receives the number of pieces when non-null.
double bms_image_mass(const ConformalDensity& density, const ReducedWord& g,
                      const ProductCylinder& pc, std::size_t* pieces = nullptr);

struct TubeElement {
  ReducedWord g;
  double sigma = 0.0;   // sigma(g, eta)
  double tau = 0.0;     // tau(g, xi, eta)
  double offset = 0.0;  // (g xi, g eta)
};

enum class TubeBand { Sigma, Tau };

// Every g with the banded cocycle in [a, b] and (g xi, g eta) <= M, found by
// walking the geodesic from xi to eta and hanging side words of length <= M
// off each vertex. Sorted length-lex.
std::vector<TubeElement> tube_enumerate(const ConformalDensity& density, const BoundaryPoint& xi,
                                        const BoundaryPoint& eta, double a, double b, double M,
                                        TubeBand band = TubeBand::Sigma,
                                        std::size_t cap = 10'000'000);

// (1/(b-a)) sum over the tube of f(g xi, g eta). Throws when f reaches the
// diagonal.
double hopf_average(const ConformalDensity& density, const KernelStep& f, const BoundaryPoint& xi,
                    const BoundaryPoint& eta, double a, double T, TubeBand band = TubeBand::Sigma,
                    std::size_t cap = 10'000'000);

// Integral of f against the BMS measure, summed over f's rectangles.
double bms_integral(const ConformalDensity& density, const KernelStep& f);

// Mean letter weight along a mu-typical ray, under the stationary law of the
// letter chain.
double mean_step_length(const ConformalDensity& density);
// Factor c with J -> c * integral f dm when J counts group elements:
// 1 / (mean step * m{(xi, eta) = 0}).
double flow_normalization(const ConformalDensity& density);

struct ErgodicParameters {
  std::size_t pairs = 50;
  std::vector<double> t_grid{25, 50, 100, 200};
  double a = 0.0;
  std::uint64_t seed = 1;
  std::size_t cap = 10'000'000;
  int threads = 1;
};

ExperimentReport ergodic_experiment(const ConformalDensity& density, const KernelStep& f,
                                    const ErgodicParameters& params);

// Samples (g, xi, eta) with (xi, eta) < M and (g xi, g eta) < M and reports
// |tau(g, xi, eta) - sigma(g, eta)|.
ExperimentReport tau_sigma_gap_report(const ConformalDensity& density, double M,
                                      std::size_t samples, std::uint64_t seed);

// Exact decision of g D ∩ D != ∅ for D = {d(xi, eta) > theta, |t| < k}.
bool properness_hit(const ConformalDensity& density, const ReducedWord& g, double theta, double k);
ExperimentReport properness_report(const ConformalDensity& density, double theta, double k,
                                   std::size_t max_letters, std::size_t cap);

// Cocycle identities on random triples: strict cocycle for tau and sigma,
// and rho == sigma.
ExperimentReport cocycle_report(const ConformalDensity& density, std::size_t samples,
                                std::uint64_t seed);

// bms_image_mass against bms_mass over random g and rectangles.
ExperimentReport bms_invariance_report(const ConformalDensity& density, std::size_t trials,
                                       std::uint64_t seed);

// |tube| / L for growing band lengths L at fixed M.
ExperimentReport tube_census_report(const ConformalDensity& density, const BoundaryPoint& xi,
                                    const BoundaryPoint& eta, double M,
                                    const std::vector<double>& lengths, std::size_t cap);

}  // namespace boundary_lab
