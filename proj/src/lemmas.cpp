#include "boundary_lab/lemmas.hpp"
#include "boundary_lab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boundary_lab {

std::size_t letters_for_reach(const GroupModel& model, double reach) {
  return static_cast<std::size_t>(std::ceil(std::max(reach, 0.0) / model.min_weight())) + 2;
}

namespace {

struct MinMax {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  double spread() const { return hi / lo; }
};

}  // namespace

ExperimentReport shadow_lemma_report(const ConformalDensity& density, double sigma0, double R_max,
                                     std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("shadow", {"g", "length", "shadow", "mu_shadow", "ratio"});
  report.parameters["sigma0"] = sigma0;
  report.parameters["R_max"] = R_max;
  MinMax range;
  model.for_each_in_ball(
      R_max,
      [&](const ReducedWord& g) {
        if (g.empty()) return;
        Cylinder c = shadow(model, g, sigma0);
        double m = density.mu(c);
        double ratio = m * std::exp(density.h() * g.wlen());
        range.add(ratio);
        report.add_row({model.format(g), g.wlen(), model.format(c.prefix), m, ratio});
      },
      cap);
  report.summary["min_ratio"] = range.lo;
  report.summary["max_ratio"] = range.hi;
  report.summary["spread"] = range.spread();
  return report;
}

ExperimentReport ahlfors_report(const ConformalDensity& density, std::size_t samples, double k_max,
                                bool integer_k, std::uint64_t seed) {
  const GroupModel& model = density.model();
  VisualMetric vm = density.metric();
  ExperimentReport report("ahlfors", {"sample", "xi", "k", "rho", "ball", "mu_ball", "ratio"});
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  report.parameters["k_max"] = k_max;
  report.parameters["integer_k"] = integer_k;
  Rng rng(seed);
  std::uniform_real_distribution<double> real_k(0.0, k_max);
  std::uniform_int_distribution<int> int_k(0, static_cast<int>(std::floor(k_max)));
  MinMax range;
  for (std::size_t i = 0; i < samples; ++i) {
    double k = integer_k ? static_cast<double>(int_k(rng)) : real_k(rng);
    double rho = std::exp(-vm.epsilon() * k * model.min_weight());
    double reach = -std::log(rho) / vm.epsilon() + model.max_weight();
    BoundaryPoint xi = sample_point(density, reach, rng);
    Cylinder b = ball(model, vm, xi, rho);
    double m = density.mu(b);
    double ratio = m / std::pow(rho, density.dimension());
    range.add(ratio);
    report.add_row({static_cast<std::int64_t>(i), xi.format(model), k, rho,
                    model.format(b.prefix), m, ratio});
  }
  report.summary["min_ratio"] = range.lo;
  report.summary["max_ratio"] = range.hi;
  return report;
}

ExperimentReport generalized_shadow_report(const ConformalDensity& density, double R_max,
                                           double s_step, double spread_bound, std::size_t cap) {
  if (!(s_step > 0.0)) throw std::invalid_argument("s grid step must be positive");
  const GroupModel& model = density.model();
  ExperimentReport report("generalized-shadow",
                          {"g", "length", "s", "margin", "mu_set", "ratio"});
  report.parameters["R_max"] = R_max;
  report.parameters["s_step"] = s_step;
  report.parameters["spread_bound"] = spread_bound;
  struct Row {
    double margin;
    double ratio;
  };
  std::vector<Row> rows;
  model.for_each_in_ball(
      R_max,
      [&](const ReducedWord& g) {
        for (int i = 0;; ++i) {
          double s = i * s_step;
          if (!model.length_less(s, g.wlen())) break;
          // {(g, xi) > s} is the cylinder on the shortest prefix longer than s.
          double len = 0.0;
          std::size_t m = 0;
          while (!model.length_greater(len, s)) len += model.weight(g[m++]);
          double mass = density.mu_last(g[m - 1], len);
          double ratio = mass * std::exp(density.h() * s);
          rows.push_back({g.wlen() - s, ratio});
          report.add_row({model.format(g), g.wlen(), s, g.wlen() - s, mass, ratio});
        }
      },
      cap);
  double measured_c = std::numeric_limits<double>::infinity();
  MinMax window;
  for (int j = 0; !rows.empty(); ++j) {
    double c = j * s_step;
    MinMax range;
    for (const auto& r : rows) {
      if (model.length_greater(r.margin, c)) range.add(r.ratio);
    }
    if (range.lo > range.hi) break;
    if (range.spread() <= spread_bound) {
      measured_c = c;
      window = range;
      break;
    }
  }
  report.summary["measured_C"] = measured_c;
  report.summary["min_ratio"] = window.lo;
  report.summary["max_ratio"] = window.hi;
  return report;
}

ExperimentReport cone_report(const ConformalDensity& density, double R, double alpha,
                             const std::vector<double>& s_grid, std::size_t samples,
                             std::uint64_t seed, std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("cone", {"sample", "xi", "s", "count", "ratio"});
  report.parameters["R"] = R;
  report.parameters["alpha"] = alpha;
  report.parameters["s_grid"] = s_grid;
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  std::vector<ReducedWord> annulus = model.annulus(R, alpha, cap);
  Rng rng(seed);
  MinMax range;
  for (std::size_t i = 0; i < samples; ++i) {
    BoundaryPoint xi = sample_point(density, R + alpha, rng);
    std::vector<double> products;
    products.reserve(annulus.size());
    for (const auto& g : annulus) products.push_back(gromov_wb(model, g, xi));
    for (double s : s_grid) {
      auto count = std::count_if(products.begin(), products.end(),
                                 [&](double p) { return model.length_greater(p, s); });
      double ratio = static_cast<double>(count) / std::exp(density.h() * (R - s));
      range.add(ratio);
      report.add_row({static_cast<std::int64_t>(i), xi.format(model), s,
                      static_cast<std::int64_t>(count), ratio});
    }
  }
  report.summary["annulus_size"] = static_cast<std::int64_t>(annulus.size());
  report.summary["min_ratio"] = range.lo;
  report.summary["max_ratio"] = range.hi;
  return report;
}

ExperimentReport cover_multiplicity_report(const ConformalDensity& density, double R, double alpha,
                                           double sigma0, std::size_t samples, std::uint64_t seed,
                                           std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("cover", {"sample", "xi", "multiplicity"});
  report.parameters["R"] = R;
  report.parameters["alpha"] = alpha;
  report.parameters["sigma0"] = sigma0;
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  std::vector<Cylinder> shadows;
  model.for_each_in_annulus(
      R, alpha, [&](const ReducedWord& g) { shadows.push_back(shadow(model, g, sigma0)); }, cap);
  Rng rng(seed);
  MinMax range;
  for (std::size_t i = 0; i < samples; ++i) {
    BoundaryPoint xi = sample_point(density, R + alpha, rng);
    auto count = std::count_if(shadows.begin(), shadows.end(),
                               [&](const Cylinder& c) { return c.contains(xi); });
    range.add(static_cast<double>(count));
    report.add_row({static_cast<std::int64_t>(i), xi.format(model), static_cast<std::int64_t>(count)});
  }
  report.summary["annulus_size"] = static_cast<std::int64_t>(shadows.size());
  report.summary["min_multiplicity"] = range.lo;
  report.summary["max_multiplicity"] = range.hi;
  return report;
}

ExperimentReport growth_report(const GroupModel& model, double h, double alpha,
                               const std::vector<double>& radii, std::size_t cap) {
  ExperimentReport report("growth", {"R", "count", "log_count", "normalized"});
  report.parameters["alpha"] = alpha;
  report.parameters["radii"] = radii;
  std::vector<double> xs;
  std::vector<double> ys;
  MinMax range;
  for (double R : radii) {
    std::size_t count = 0;
    model.for_each_in_annulus(R, alpha, [&](const ReducedWord&) { ++count; }, cap);
    double normalized = static_cast<double>(count) * std::exp(-h * R);
    double log_count = std::log(static_cast<double>(count));
    xs.push_back(R);
    ys.push_back(log_count);
    range.add(normalized);
    report.add_row({R, static_cast<std::int64_t>(count), log_count, normalized});
  }
  report.summary["h"] = h;
  if (xs.size() >= 2) report.summary["slope"] = fit_line(xs, ys).slope;
  report.summary["min_normalized"] = range.lo;
  report.summary["max_normalized"] = range.hi;
  return report;
}

}  // namespace boundary_lab
