#include "boundary_lab/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace boundary_lab {

namespace {

constexpr double kPowerTolerance = 1e-14;
constexpr int kPowerMaxIterations = 100000;
constexpr double kBisectionTolerance = 1e-12;

void apply_transfer(const GroupModel& model, const std::vector<double>& decay,
                    const std::vector<double>& x, std::vector<double>& out) {
  int n = model.alphabet_size();
  double total = 0.0;
  for (int b = 0; b < n; ++b) total += decay[b] * x[b];
  for (int a = 0; a < n; ++a) {
    Letter excluded = model.inverse(static_cast<Letter>(a));
    out[a] = total - decay[excluded] * x[excluded];
  }
}

}  // namespace

double spectral_radius(const GroupModel& model, double s, std::vector<double>* perron) {
  int n = model.alphabet_size();
  std::vector<double> decay(n);
  for (int b = 0; b < n; ++b) decay[b] = std::exp(-s * model.weight(static_cast<Letter>(b)));
  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  double lambda = 0.0;
  for (int it = 0; it < kPowerMaxIterations; ++it) {
    apply_transfer(model, decay, x, y);
    double top = *std::max_element(y.begin(), y.end());
    double change = 0.0;
    for (int a = 0; a < n; ++a) {
      y[a] /= top;
      change = std::max(change, std::abs(y[a] - x[a]));
    }
    x.swap(y);
    bool settled = std::abs(top - lambda) <= kPowerTolerance * top && change <= kPowerTolerance;
    lambda = top;
    if (settled) break;
  }
  if (perron != nullptr) *perron = x;
  return lambda;
}

double critical_exponent(const GroupModel& model) {
  double lo = 0.0;
  double hi = 1.0 / model.min_weight();
  while (spectral_radius(model, hi) >= 1.0) hi *= 2.0;
  while (hi - lo > kBisectionTolerance) {
    double mid = 0.5 * (lo + hi);
    if (spectral_radius(model, mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConformalDensity::ConformalDensity(GroupModel model, double h, double epsilon,
                                   std::vector<double> v)
    : model_(std::move(model)), h_(h), epsilon_(epsilon), v_(std::move(v)), z_(0.0) {
  for (int a = 0; a < model_.alphabet_size(); ++a) {
    z_ += std::exp(-h_ * model_.weight(static_cast<Letter>(a))) * v_[a];
  }
}

ConformalDensity ConformalDensity::build(const GroupModel& model, double epsilon) {
  double h = critical_exponent(model);
  if (!(epsilon > 0.0) || !(epsilon < h)) {
    throw std::invalid_argument("epsilon must lie strictly between 0 and the critical exponent");
  }
  std::vector<double> v;
  spectral_radius(model, h, &v);
  return ConformalDensity(model, h, epsilon, std::move(v));
}

double ConformalDensity::mu_last(Letter last, double wlen) const {
  return std::exp(-h_ * wlen) * v_[last] / z_;
}

double ConformalDensity::mu_letters(std::span<const Letter> prefix) const {
  if (prefix.empty()) return 1.0;
  return mu_last(prefix.back(), model_.weighted_length(prefix));
}

double ConformalDensity::mu(const Cylinder& c) const {
  if (c.whole()) return 1.0;
  return mu_last(c.prefix.back(), c.prefix.wlen());
}

double ConformalDensity::first_letter_probability(Letter a) const {
  return mu_last(a, model_.weight(a));
}

double ConformalDensity::transition(Letter from, Letter to) const {
  if (!model_.can_follow(from, to)) return 0.0;
  return std::exp(-h_ * model_.weight(to)) * v_[to] / v_[from];
}

double ConformalDensity::rn_derivative(const ReducedWord& g, const BoundaryPoint& xi) const {
  return std::exp(-h_ * (g.wlen() - 2.0 * gromov_wb(model_, g, xi)));
}

double ConformalDensity::rn_derivative_by_cylinders(const ReducedWord& g,
                                                    const BoundaryPoint& xi) const {
  std::size_t cancel = 0;
  while (cancel < g.size() && g[cancel] == xi.letter(cancel)) ++cancel;
  ReducedWord piece = xi.prefix(model_, cancel + 1);
  ReducedWord image = model_.multiply(model_.invert(g), piece);
  return mu_letters(image.letters()) / mu_letters(piece.letters());
}

ReducedWord ConformalDensity::sample_prefix(std::size_t depth, Rng& rng) const {
  if (depth == 0) throw std::invalid_argument("sample depth must be at least 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int n = model_.alphabet_size();
  std::vector<Letter> letters;
  letters.reserve(depth);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < depth; ++i) {
    for (int b = 0; b < n; ++b) {
      auto s = static_cast<Letter>(b);
      weights[b] = letters.empty() ? first_letter_probability(s) : transition(letters.back(), s);
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double target = unit(rng) * total;
    int pick = 0;
    double running = weights[0];
    while (running <= target && pick + 1 < n) running += weights[++pick];
    while (weights[pick] == 0.0) --pick;
    letters.push_back(static_cast<Letter>(pick));
  }
  return model_.from_letters(letters);
}

double poincare_truncated(const GroupModel& model, double s, int N, const Cylinder& c,
                          TruncationMode mode) {
  if (N < 0) throw std::invalid_argument("truncation level must be nonnegative");
  double h = critical_exponent(model);
  if (!(s > h)) throw std::invalid_argument("Poincare series needs s above the critical exponent");
  if (c.whole()) return 1.0;
  int n = model.alphabet_size();
  double numerator = 0.0;
  double denominator = 0.0;
  if (mode == TruncationMode::LetterLevels) {
    // layer[a] = sum of exp(-s wlen) over words of the current length ending in a
    std::vector<double> layer(n, 0.0);
    std::vector<double> inside(n, 0.0);
    denominator = 1.0;
    for (int a = 0; a < n; ++a) layer[a] = std::exp(-s * model.weight(static_cast<Letter>(a)));
    if (c.prefix.size() <= static_cast<std::size_t>(N)) {
      inside[c.prefix.back()] = std::exp(-s * c.prefix.wlen());
    }
    for (int len = 1; len <= N; ++len) {
      denominator += std::accumulate(layer.begin(), layer.end(), 0.0);
      if (static_cast<std::size_t>(len) >= c.prefix.size()) {
        numerator += std::accumulate(inside.begin(), inside.end(), 0.0);
      }
      std::vector<double> next(n, 0.0);
      std::vector<double> next_inside(n, 0.0);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (!model.can_follow(static_cast<Letter>(a), static_cast<Letter>(b))) continue;
          double step = std::exp(-s * model.weight(static_cast<Letter>(b)));
          next[b] += layer[a] * step;
          if (static_cast<std::size_t>(len) >= c.prefix.size()) next_inside[b] += inside[a] * step;
        }
      }
      layer.swap(next);
      if (static_cast<std::size_t>(len) >= c.prefix.size()) inside.swap(next_inside);
    }
    return numerator / denominator;
  }
  // Weighted truncation: enumerate the ball of radius N directly.
  model.for_each_in_ball(
      static_cast<double>(N),
      [&](const ReducedWord& g) {
        double term = std::exp(-s * g.wlen());
        denominator += term;
        if (g.size() >= c.prefix.size() &&
            common_prefix_letters(g.letters(), c.prefix.letters()) == c.prefix.size()) {
          numerator += term;
        }
      },
      std::numeric_limits<std::size_t>::max());
  return numerator / denominator;
}

}  // namespace boundary_lab
