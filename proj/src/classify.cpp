#include "boundary_lab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boundary_lab/errors.hpp"
#include "boundary_lab/sampling.hpp"

namespace boundary_lab {

MetricPair MetricPair::build(const GroupModel& m1, double eps1, const GroupModel& m2, double eps2) {
  if (m1.rank() != m2.rank()) throw std::invalid_argument("metric pair needs a common alphabet");
  return MetricPair{ConformalDensity::build(m1, eps1), ConformalDensity::build(m2, eps2)};
}

MetricPair MetricPair::at_dimension(const GroupModel& m1, const GroupModel& m2, double D) {
  if (!(D > 1.0)) throw std::invalid_argument("dimension must exceed 1");
  return build(m1, critical_exponent(m1) / D, m2, critical_exponent(m2) / D);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Similar: return "SIMILAR";
    case Verdict::NotSimilar: return "NOT_SIMILAR";
    default: return "INCONCLUSIVE";
  }
}

std::string to_string(MeasureVerdict v) {
  switch (v) {
    case MeasureVerdict::Equivalent: return "EQUIVALENT";
    case MeasureVerdict::SingularTendency: return "SINGULAR_TENDENCY";
    default: return "INCONCLUSIVE";
  }
}

namespace {

Verdict similarity_verdict(double slope) {
  if (slope < kFlatSlope) return Verdict::Similar;
  if (slope > kGrowingSlope) return Verdict::NotSimilar;
  return Verdict::Inconclusive;
}

MeasureVerdict measure_verdict(double slope) {
  if (slope < kFlatSlope) return MeasureVerdict::Equivalent;
  if (slope > kGrowingSlope) return MeasureVerdict::SingularTendency;
  return MeasureVerdict::Inconclusive;
}

bool agree(Verdict a, MeasureVerdict b) {
  return (a == Verdict::Similar && b == MeasureVerdict::Equivalent) ||
         (a == Verdict::NotSimilar && b == MeasureVerdict::SingularTendency) ||
         (a == Verdict::Inconclusive && b == MeasureVerdict::Inconclusive);
}

std::vector<double> weights_of(const ConformalDensity& d) {
  auto w = d.model().generator_weights();
  return {w.begin(), w.end()};
}

}  // namespace

ExperimentReport similarity_deviation_report(const MetricPair& mp, int R_max, std::size_t cap) {
  if (R_max < 2) throw std::invalid_argument("need at least two radii");
  const GroupModel& m1 = mp.first.model();
  const GroupModel& m2 = mp.second.model();
  double h1 = mp.first.h();
  double h2 = mp.second.h();
  ExperimentReport report("similarity", {"R", "max_deviation", "words"});
  report.parameters["weights1"] = weights_of(mp.first);
  report.parameters["weights2"] = weights_of(mp.second);
  report.parameters["R_max"] = R_max;
  // Maxima per unit shell (R-1, R], then running maxima over R.
  std::vector<double> shell(static_cast<std::size_t>(R_max) + 1, 0.0);
  std::vector<std::int64_t> counts(shell.size(), 0);
  m1.for_each_in_ball(static_cast<double>(R_max), [&](const ReducedWord& g) {
    double dev = std::abs(h1 * g.wlen() - h2 * m2.weighted_length(g.letters()));
    auto r = static_cast<std::size_t>(std::max(0.0, std::ceil(g.wlen() - m1.tolerance())));
    r = std::min(r, shell.size() - 1);
    shell[r] = std::max(shell[r], dev);
    ++counts[r];
  }, cap);
  std::vector<double> radii;
  std::vector<double> devs;
  double worst = shell[0];
  std::int64_t count = counts[0];
  for (int R = 1; R <= R_max; ++R) {
    worst = std::max(worst, shell[static_cast<std::size_t>(R)]);
    count += counts[static_cast<std::size_t>(R)];
    radii.push_back(R);
    devs.push_back(worst);
    report.add_row({static_cast<double>(R), worst, count});
  }
  LinearFit fit = fit_line(radii, devs);
  Verdict v = similarity_verdict(fit.slope);
  report.summary["h1"] = h1;
  report.summary["h2"] = h2;
  report.summary["slope"] = fit.slope;
  report.summary["max_deviation"] = *std::max_element(devs.begin(), devs.end());
  report.summary["verdict"] = to_string(v);
  return report;
}

ExperimentReport density_ratio_report(const MetricPair& mp, int depth, std::size_t cap) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  const GroupModel& m1 = mp.first.model();
  double count = static_cast<double>(m1.alphabet_size()) *
                 std::pow(static_cast<double>(m1.alphabet_size() - 1), depth - 1);
  if (count > static_cast<double>(cap)) throw CapExceeded("density ratio depth exceeds the cap");
  ExperimentReport report("density-ratio", {"n", "min_ratio", "max_ratio", "spread", "log_spread"});
  report.parameters["weights1"] = weights_of(mp.first);
  report.parameters["weights2"] = weights_of(mp.second);
  report.parameters["depth"] = depth;
  std::vector<double> ns;
  std::vector<double> logs;
  for (int n = 1; n <= depth; ++n) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    m1.for_each_of_letter_length(static_cast<std::size_t>(n), [&](const ReducedWord& w) {
      double r = mp.first.mu_letters(w.letters()) / mp.second.mu_letters(w.letters());
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    });
    double spread = hi / lo;
    ns.push_back(n);
    logs.push_back(std::log(spread));
    report.add_row({static_cast<std::int64_t>(n), lo, hi, spread, std::log(spread)});
  }
  double slope = depth >= 2 ? fit_line(ns, logs).slope : 0.0;
  report.summary["log_slope"] = slope;
  report.summary["verdict"] = to_string(measure_verdict(slope));
  return report;
}

double cross_ratio(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& x,
                   const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& w) {
  const BoundaryPoint* pts[] = {&x, &y, &z, &w};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (*pts[i] == *pts[j]) throw std::invalid_argument("cross ratio needs four distinct points");
    }
  }
  auto d = [&](const BoundaryPoint& p, const BoundaryPoint& q) {
    return visual_distance(model, vm, p, q);
  };
  return d(x, z) * d(y, w) / (d(x, w) * d(y, z));
}

ExperimentReport holder_fit_report(const MetricPair& mp, std::size_t samples, std::uint64_t seed) {
  const GroupModel& m1 = mp.first.model();
  const GroupModel& m2 = mp.second.model();
  VisualMetric vm1 = mp.first.metric();
  VisualMetric vm2 = mp.second.metric();
  ExperimentReport report("holder", {"sample", "ln_d1", "ln_d2", "ln_cr1", "ln_cr2"});
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  report.parameters["epsilon1"] = mp.first.epsilon();
  report.parameters["epsilon2"] = mp.second.epsilon();
  Rng rng(seed);
  std::vector<double> x1, x2, c1, c2;
  for (std::size_t i = 0; i < samples;) {
    BoundaryPoint p[4] = {random_point(m1, 8, 3, rng), random_point(m1, 8, 3, rng),
                          random_point(m1, 8, 3, rng), random_point(m1, 8, 3, rng)};
    bool distinct = true;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) distinct = distinct && !(p[a] == p[b]);
    }
    if (!distinct) continue;
    double d1 = std::log(visual_distance(m1, vm1, p[0], p[1]));
    double d2 = std::log(visual_distance(m2, vm2, p[0], p[1]));
    double r1 = std::log(cross_ratio(m1, vm1, p[0], p[1], p[2], p[3]));
    double r2 = std::log(cross_ratio(m2, vm2, p[0], p[1], p[2], p[3]));
    x1.push_back(d1);
    x2.push_back(d2);
    c1.push_back(r1);
    c2.push_back(r2);
    report.add_row({static_cast<std::int64_t>(i), d1, d2, r1, r2});
    ++i;
  }
  LinearFit fit = fit_line(x1, x2);
  double expected = mp.first.dimension() / mp.second.dimension();
  report.summary["slope"] = fit.slope;
  report.summary["intercept"] = fit.intercept;
  report.summary["max_residual"] = fit.max_residual;
  report.summary["expected_slope"] = expected;
  // Cross ratios vanish identically (ln = 0) for many quadruples; fit only
  // when there is spread.
  bool spread = std::any_of(c1.begin(), c1.end(), [&](double v) { return v != c1.front(); });
  if (spread) {
    LinearFit cr = fit_line(c1, c2);
    report.summary["cross_ratio_slope"] = cr.slope;
    report.summary["cross_ratio_max_residual"] = cr.max_residual;
  }
  return report;
}

std::vector<ConstructedPair> constructed_pairs() {
  return {
      {"unit-vs-double", {1, 1}, {2, 2}, Verdict::Similar},
      {"F2W-vs-half", {1, 2}, {0.5, 1}, Verdict::Similar},
      {"F2W-vs-triple", {1, 2}, {3, 6}, Verdict::Similar},
      {"F3-unit-vs-F3-scaled", {1, 1, 1}, {1.5, 1.5, 1.5}, Verdict::Similar},
      {"unit-vs-F2W", {1, 1}, {1, 2}, Verdict::NotSimilar},
      {"F2W-vs-swapped", {1, 2}, {2, 1}, Verdict::NotSimilar},
      {"F2W-vs-(1,3)", {1, 2}, {1, 3}, Verdict::NotSimilar},
      {"F3-unit-vs-(1,1,2)", {1, 1, 1}, {1, 1, 2}, Verdict::NotSimilar},
  };
}

ExperimentReport classify_report(const std::vector<ConstructedPair>& pairs, double D, int R_max,
                                 int depth, std::size_t samples, std::uint64_t seed,
                                 std::size_t cap) {
  ExperimentReport report("classify",
                          {"pair", "weights1", "weights2", "expected", "deviation_slope", "verdict",
                           "density_log_slope", "density_verdict", "agree", "holder_slope",
                           "holder_expected"});
  report.parameters["D"] = D;
  report.parameters["R_max"] = R_max;
  report.parameters["depth"] = depth;
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  auto text = [](const std::vector<double>& w) {
    std::string s;
    for (double x : w) s += (s.empty() ? "" : " ") + format_number(x);
    return s;
  };
  bool all_correct = true;
  bool all_agree = true;
  double worst_holder = 0.0;
  for (const auto& p : pairs) {
    GroupModel m1(static_cast<int>(p.weights1.size()), p.weights1);
    GroupModel m2(static_cast<int>(p.weights2.size()), p.weights2);
    MetricPair mp = MetricPair::at_dimension(m1, m2, D);
    ExperimentReport sim = similarity_deviation_report(mp, R_max, cap);
    ExperimentReport dens = density_ratio_report(mp, depth, cap);
    ExperimentReport hol = holder_fit_report(mp, samples, seed);
    std::string verdict = sim.summary["verdict"];
    std::string mverdict = dens.summary["verdict"];
    double slope = sim.summary["slope"];
    double dslope = dens.summary["log_slope"];
    Verdict v = similarity_verdict(slope);
    bool ok = agree(v, measure_verdict(dslope));
    all_agree = all_agree && ok;
    if (p.expected) all_correct = all_correct && v == *p.expected;
    double hs = hol.summary["slope"];
    double he = hol.summary["expected_slope"];
    if (v == Verdict::Similar) worst_holder = std::max(worst_holder, std::abs(hs - he));
    report.add_row({p.name, text(p.weights1), text(p.weights2), p.expected ? to_string(*p.expected) : std::string("unknown"), slope, verdict,
                    dslope, mverdict, std::string(ok ? "yes" : "no"), hs, he});
  }
  report.summary["all_verdicts_match_ground_truth"] = all_correct;
  report.summary["all_verdicts_agree"] = all_agree;
  report.summary["max_holder_error_on_similar"] = worst_holder;
  return report;
}

}  // namespace boundary_lab
