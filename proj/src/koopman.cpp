#include "boundary_lab/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace boundary_lab {

namespace {

// exp(h ((g, xi) - |g| / 2)) given the common prefix length.
double p_value(const ConformalDensity& density, const ReducedWord& g, double common) {
  return std::exp(density.h() * (common - 0.5 * g.wlen()));
}

}  // namespace

StepFunction p_weight(const ConformalDensity& density, const ReducedWord& g) {
  const GroupModel& model = density.model();
  return StepFunction::refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
    std::size_t n = common_prefix_letters(w, g.letters());
    if (n == w.size() && n < g.size()) return std::nullopt;
    return p_value(density, g, model.weighted_length(g.letters().first(n)));
  });
}

double p1_norm(const ConformalDensity& density, const ReducedWord& g) {
  // The set {(g, xi) = W(j)} is [g_1..g_j] minus [g_1..g_{j+1}].
  const GroupModel& model = density.model();
  double total = 0.0;
  double len = 0.0;
  double mass_here = 1.0;
  for (std::size_t j = 0; j <= g.size(); ++j) {
    double mass_next = 0.0;
    if (j < g.size()) mass_next = density.mu_last(g[j], len + model.weight(g[j]));
    total += (mass_here - mass_next) * p_value(density, g, len);
    if (j < g.size()) {
      len += model.weight(g[j]);
      mass_here = mass_next;
    }
  }
  return total;
}

double p_tilde(const ConformalDensity& density, const ReducedWord& g, const BoundaryPoint& xi) {
  return p_value(density, g, gromov_wb(density.model(), g, xi)) / p1_norm(density, g);
}

StepFunction koopman_apply(const ConformalDensity& density, const ReducedWord& g,
                           const StepFunction& f) {
  const GroupModel& model = density.model();
  ReducedWord ginv = model.invert(g);
  return StepFunction::refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
    std::size_t j = common_prefix_letters(w, g.letters());
    // On [w] with w a prefix of g the pullback g^-1 [w] is not a cylinder.
    if (j == w.size()) return std::nullopt;
    auto value = f.on(ginv.letters().first(g.size() - j), w.subspan(j));
    if (!value) return std::nullopt;
    return *value * p_value(density, g, model.weighted_length(w.first(j)));
  });
}

double koopman_pairing(const ConformalDensity& density, const ReducedWord& g,
                       const StepFunction& phi, const StepFunction& psi) {
  const GroupModel& model = density.model();
  ReducedWord ginv = model.invert(g);
  std::span<const Letter> gl = g.letters();
  std::vector<Letter> w;
  double total = 0.0;
  // common: weighted lcp with g; matching: w is still a prefix of g.
  auto visit = [&](auto&& self, double wlen, double common, bool matching) -> void {
    if (!(matching && w.size() <= g.size())) {
      std::size_t j = matching ? g.size() : 0;
      if (!matching) j = common_prefix_letters(w, gl);
      auto psi_v = psi.on(w);
      if (psi_v) {
        auto phi_v = phi.on(ginv.letters().first(g.size() - j), std::span<const Letter>(w).subspan(j));
        if (phi_v) {
          total += density.mu_last(w.back(), wlen) * p_value(density, g, common) * *phi_v * *psi_v;
          return;
        }
      }
    }
    for (int s = 0; s < model.alphabet_size(); ++s) {
      auto letter = static_cast<Letter>(s);
      if (!w.empty() && !model.can_follow(w.back(), letter)) continue;
      bool still = matching && w.size() < g.size() && gl[w.size()] == letter;
      w.push_back(letter);
      self(self, wlen + model.weight(letter), still ? common + model.weight(letter) : common, still);
      w.pop_back();
    }
  };
  visit(visit, 0.0, 0.0, true);
  return total;
}

double matrix_coefficient(const ConformalDensity& density, const ReducedWord& g,
                          const StepFunction& phi, const StepFunction& psi) {
  return koopman_pairing(density, g, phi, psi) / p1_norm(density, g);
}

StepFunction distance_profile(const ConformalDensity& density, const BoundaryPoint& target,
                              std::size_t depth) {
  const GroupModel& model = density.model();
  std::vector<Letter> ray = target.prefix_letters(depth);
  double eps = density.epsilon();
  return StepFunction::refine(model, [&](std::span<const Letter> w) -> std::optional<double> {
    std::size_t n = common_prefix_letters(w, ray);
    if (n < w.size() || n == depth) return std::exp(-eps * model.weighted_length(w.first(n)));
    return std::nullopt;
  });
}

ExperimentReport matrix_coefficient_decay_report(const ConformalDensity& density,
                                                 const StepFunction& phi, const StepFunction& psi,
                                                 int n_min, int n_max, std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("matrix-coeff", {"n", "count", "max_error", "mean_error", "argmax"});
  double l_phi = phi.lipschitz(model, density.epsilon());
  double l_psi = psi.lipschitz(model, density.epsilon());
  report.parameters["n_min"] = n_min;
  report.parameters["n_max"] = n_max;
  report.parameters["D"] = density.dimension();
  report.parameters["epsilon"] = density.epsilon();
  report.parameters["lipschitz_phi"] = l_phi;
  report.parameters["lipschitz_psi"] = l_psi;
  std::vector<double> xs;
  std::vector<double> ys;
  double worst_scaled = 0.0;
  double bound_numerator = l_phi * psi.sup_abs() + l_psi * phi.sup_abs();
  for (int n = n_min; n <= n_max; ++n) {
    double best = -1.0;
    double sum = 0.0;
    std::size_t count = 0;
    std::string argmax;
    model.for_each_in_annulus(
        n, 0.5,
        [&](const ReducedWord& g) {
          double value = matrix_coefficient(density, g, phi, psi);
          double limit = phi.at(check(model, g)) * psi.at(hat(model, g));
          double err = std::abs(value - limit);
          sum += err;
          ++count;
          if (err > best) {
            best = err;
            argmax = model.format(g);
          }
        },
        cap);
    if (count == 0) continue;
    double mean = sum / static_cast<double>(count);
    report.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(count), best, mean, argmax});
    xs.push_back(std::log(1.0 + n));
    ys.push_back(std::log(best));
    double rate = std::pow(1.0 + n, -1.0 / density.dimension());
    worst_scaled = std::max(worst_scaled, best / (bound_numerator * rate));
  }
  report.summary["reference_slope"] = -1.0 / density.dimension();
  if (xs.size() >= 2) report.summary["slope"] = fit_line(xs, ys).slope;
  report.summary["max_error_over_bound"] = worst_scaled;
  return report;
}

ExperimentReport p1_norm_report(const ConformalDensity& density, double R_max, std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("p1norm", {"length", "count", "min_value", "max_value"});
  report.parameters["R_max"] = R_max;
  struct Bucket {
    std::int64_t count = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  // Lengths are bucketed on the tolerance grid so equal lengths share a row.
  std::map<long long, std::pair<double, Bucket>> buckets;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  model.for_each_in_ball(
      R_max,
      [&](const ReducedWord& g) {
        double value = p1_norm(density, g) * std::exp(0.5 * density.h() * g.wlen()) / (1.0 + g.wlen());
        auto key = static_cast<long long>(std::llround(g.wlen() / model.tolerance()));
        auto& [len, b] = buckets[key];
        len = g.wlen();
        ++b.count;
        b.lo = std::min(b.lo, value);
        b.hi = std::max(b.hi, value);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
      },
      cap);
  for (const auto& [key, entry] : buckets) {
    report.add_row({entry.first, entry.second.count, entry.second.lo, entry.second.hi});
  }
  report.summary["min_value"] = lo;
  report.summary["max_value"] = hi;
  report.summary["spread"] = hi / lo;
  return report;
}

double annulus_weight(const ConformalDensity& density, double R, double alpha,
                      const BoundaryPoint& xi, std::size_t cap) {
  double total = 0.0;
  density.model().for_each_in_annulus(
      R, alpha, [&](const ReducedWord& g) { total += p_tilde(density, g, xi); }, cap);
  return total / std::exp(density.h() * R);
}

ExperimentReport annulus_weight_report(const ConformalDensity& density,
                                       const std::vector<double>& radii, double alpha,
                                       const BoundaryPoint& xi, std::size_t cap) {
  ExperimentReport report("annulus-weight", {"R", "ratio"});
  report.parameters["alpha"] = alpha;
  report.parameters["radii"] = radii;
  report.parameters["xi"] = xi.format(density.model());
  double hi = 0.0;
  for (double R : radii) {
    double ratio = annulus_weight(density, R, alpha, xi, cap);
    hi = std::max(hi, ratio);
    report.add_row({R, ratio});
  }
  report.summary["max_ratio"] = hi;
  return report;
}

}  // namespace boundary_lab
