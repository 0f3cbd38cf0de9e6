#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "boundary_lab/boundary.hpp"
#include "boundary_lab/words.hpp"

namespace boundary_lab {

// Spectral radius of M(s)[a][b] = exp(-s * weight(b)) for b != a^-1, by power
// iteration from the all-ones vector. Optionally returns the Perron vector
// normalised to unit maximum.
double spectral_radius(const GroupModel& model, double s, std::vector<double>* perron = nullptr);

// The s with spectral_radius(s) == 1, by bisection to 1e-12.
double critical_exponent(const GroupModel& model);

using Rng = std::mt19937_64;

class ConformalDensity {
 public:
  // Rejects epsilon outside (0, h).
  static ConformalDensity build(const GroupModel& model, double epsilon);

  const GroupModel& model() const { return model_; }
  double h() const { return h_; }
  double epsilon() const { return epsilon_; }
  double dimension() const { return h_ / epsilon_; }
  double normalizer() const { return z_; }
  const std::vector<double>& perron() const { return v_; }
  VisualMetric metric() const { return VisualMetric(epsilon_, h_); }

  double mu(const Cylinder& c) const;
  // Closed form from the last letter and the weighted length.
  double mu_letters(std::span<const Letter> prefix) const;
  double mu_last(Letter last, double wlen) const;
  double first_letter_probability(Letter a) const;
  double transition(Letter from, Letter to) const;

  // exp(-h (|g| - 2 (g, xi))).
  double rn_derivative(const ReducedWord& g, const BoundaryPoint& xi) const;
  // mu([g^-1 xi_1..n]) / mu([xi_1..n]) with n the first depth past the
  // cancellation point of g^-1 against xi.
  double rn_derivative_by_cylinders(const ReducedWord& g, const BoundaryPoint& xi) const;

  // A mu-distributed reduced prefix with `depth` letters.
  ReducedWord sample_prefix(std::size_t depth, Rng& rng) const;

 private:
  ConformalDensity(GroupModel model, double h, double epsilon, std::vector<double> v);

  GroupModel model_;
  double h_;
  double epsilon_;
  std::vector<double> v_;
  double z_;
};

enum class TruncationMode {
  LetterLevels,    // |g| in letters at most N
  WeightedLength,  // wlen(g) at most N
};

// Ratio of the Poincare series restricted to g in c to the full series, both
// truncated at N.
double poincare_truncated(const GroupModel& model, double s, int N, const Cylinder& c,
                          TruncationMode mode = TruncationMode::LetterLevels);

}  // namespace boundary_lab
