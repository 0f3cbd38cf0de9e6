#include "boundary_lab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boundary_lab/errors.hpp"
#include "boundary_lab/parallel.hpp"
#include "boundary_lab/sampling.hpp"

namespace boundary_lab {

double sigma(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi) {
  return 2.0 * gromov_wb(model, model.invert(g), xi) - g.wlen();
}

double rho(const ConformalDensity& density, const ReducedWord& g, const BoundaryPoint& xi) {
  const GroupModel& model = density.model();
  return std::log(density.rn_derivative_by_cylinders(model.invert(g), xi)) / density.h();
}

double tau(const GroupModel& model, const ReducedWord& g, const BoundaryPoint& xi,
           const BoundaryPoint& eta) {
  if (xi == eta) throw std::invalid_argument("tau needs two distinct boundary points");
  ReducedWord x = model.invert(g);
  return gromov_wb(model, x, eta) - gromov_wb(model, x, xi);
}

double bms_mass(const ConformalDensity& density, const ProductCylinder& pc) {
  if (!pc.u.disjoint_from(pc.v)) throw std::invalid_argument("nested cylinders carry infinite mass");
  std::size_t n = common_prefix_letters(pc.u.prefix.letters(), pc.v.prefix.letters());
  double cp = density.model().weighted_length(pc.u.prefix.letters().first(n));
  return std::exp(2.0 * density.h() * cp) * density.mu(pc.u) * density.mu(pc.v);
}

namespace {

std::vector<Cylinder> children(const GroupModel& model, const Cylinder& c) {
  std::vector<Cylinder> out;
  for (int s = 0; s < model.alphabet_size(); ++s) {
    auto letter = static_cast<Letter>(s);
    if (!c.prefix.empty() && !model.can_follow(c.prefix.back(), letter)) continue;
    out.push_back(Cylinder{model.extend(c.prefix, letter)});
  }
  return out;
}

}  // namespace

double bms_image_mass(const ConformalDensity& density, const ReducedWord& g,
                      const ProductCylinder& pc, std::size_t* pieces) {
  const GroupModel& model = density.model();
  if (!pc.u.disjoint_from(pc.v)) throw std::invalid_argument("nested cylinders carry infinite mass");
  std::size_t count = 0;
  auto rec = [&](auto&& self, const Cylinder& u, const Cylinder& v) -> double {
    auto gu = act_on_cylinder(model, g, u);
    if (!gu) {
      double total = 0.0;
      for (const auto& c : children(model, u)) total += self(self, c, v);
      return total;
    }
    auto gv = act_on_cylinder(model, g, v);
    if (!gv) {
      double total = 0.0;
      for (const auto& c : children(model, v)) total += self(self, u, c);
      return total;
    }
    ++count;
    return bms_mass(density, ProductCylinder{*gu, *gv});
  };
  double total = rec(rec, pc.u, pc.v);
  if (pieces) *pieces = count;
  return total;
}

std::vector<TubeElement> tube_enumerate(const ConformalDensity& density, const BoundaryPoint& xi,
                                        const BoundaryPoint& eta, double a, double b, double M,
                                        TubeBand band, std::size_t cap) {
  const GroupModel& model = density.model();
  if (xi == eta) throw std::invalid_argument("the tube needs two distinct boundary points");
  if (M < 0.0) throw std::invalid_argument("side-word bound must be nonnegative");
  std::vector<TubeElement> out;
  if (a > b) return out;
  const double tol = model.tolerance();
  std::size_t n0 = *common_prefix_letters(xi, eta);
  double wc = model.weighted_length(xi.prefix_letters(n0));

  std::vector<Letter> w;
  auto emit_side_words = [&](const std::vector<Letter>& p, Letter toward_xi, Letter toward_eta) {
    auto rec = [&](auto&& self, double wlen) -> void {
      std::vector<Letter> x = p;
      for (Letter s : w) {
        if (!x.empty() && x.back() == model.inverse(s)) {
          x.pop_back();
        } else {
          x.push_back(s);
        }
      }
      ReducedWord g = model.invert(model.from_letters(x));
      TubeElement e;
      e.sigma = sigma(model, g, eta);
      e.tau = tau(model, g, xi, eta);
      e.offset = gromov_bb(model, act(model, g, xi), act(model, g, eta));
      double value = band == TubeBand::Sigma ? e.sigma : e.tau;
      if (value >= a - tol && value <= b + tol && e.offset <= M + tol) {
        e.g = std::move(g);
        out.push_back(std::move(e));
        if (out.size() > cap) throw CapExceeded("tube enumeration exceeded the cap");
      }
      for (int s = 0; s < model.alphabet_size(); ++s) {
        auto letter = static_cast<Letter>(s);
        if (w.empty() && (letter == toward_xi || letter == toward_eta)) continue;
        if (!w.empty() && !model.can_follow(w.back(), letter)) continue;
        double next = wlen + model.weight(letter);
        if (model.length_greater(next, M)) continue;
        w.push_back(letter);
        self(self, next);
        w.pop_back();
      }
    };
    rec(rec, 0.0);
  };

  // Vertices on the eta side of the branch point, c included.
  std::vector<Letter> p = xi.prefix_letters(n0);
  double weta = wc;
  for (std::size_t n = n0;; ++n) {
    double s = weta;
    double t = weta - wc;
    bool past = band == TubeBand::Sigma ? model.length_greater(s, b + M) : model.length_greater(t, b);
    if (past) break;
    bool reachable = band == TubeBand::Sigma ? !model.length_less(s, a) : !model.length_less(t, a);
    Letter toward_xi = n > n0 ? model.inverse(eta.letter(n - 1)) : xi.letter(n0);
    if (reachable) emit_side_words(p, toward_xi, eta.letter(n));
    p.push_back(eta.letter(n));
    weta += model.weight(eta.letter(n));
  }
  // Vertices strictly on the xi side.
  p = xi.prefix_letters(n0);
  double wxi = wc;
  for (std::size_t n = n0 + 1;; ++n) {
    p.push_back(xi.letter(n - 1));
    wxi += model.weight(xi.letter(n - 1));
    double s = 2.0 * wc - wxi;
    double t = wc - wxi;
    bool past = band == TubeBand::Sigma ? model.length_less(s, a) : model.length_less(t, a);
    if (past) break;
    bool reachable = band == TubeBand::Sigma ? !model.length_greater(s, b + M)
                                             : !model.length_greater(t, b);
    if (reachable) emit_side_words(p, xi.letter(n), model.inverse(xi.letter(n - 1)));
  }

  std::sort(out.begin(), out.end(), [](const TubeElement& x, const TubeElement& y) {
    return length_lex_less(x.g, y.g);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TubeElement& x, const TubeElement& y) { return x.g == y.g; }),
            out.end());
  return out;
}

double hopf_average(const ConformalDensity& density, const KernelStep& f, const BoundaryPoint& xi,
                    const BoundaryPoint& eta, double a, double T, TubeBand band, std::size_t cap) {
  if (!(T > 0.0)) throw std::invalid_argument("averaging window must have positive length");
  const GroupModel& model = density.model();
  double M = f.support_reach(model);
  if (!std::isfinite(M)) throw std::invalid_argument("f must vanish near the diagonal");
  double total = 0.0;
  for (const auto& e : tube_enumerate(density, xi, eta, a, a + T, M, band, cap)) {
    total += f.at(act(model, e.g, xi), act(model, e.g, eta));
  }
  return total / T;
}

double bms_integral(const ConformalDensity& density, const KernelStep& f) {
  double total = 0.0;
  for (const auto& [u, row] : f.rows()) {
    Cylinder cu{density.model().from_letters(u)};
    for (const auto& [v, value] : row->parts()) {
      if (value == 0.0) continue;
      total += value * bms_mass(density, ProductCylinder{cu, Cylinder{density.model().from_letters(v)}});
    }
  }
  return total;
}

double mean_step_length(const ConformalDensity& density) {
  const GroupModel& model = density.model();
  int n = model.alphabet_size();
  std::vector<double> pi(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) pi[a] = density.first_letter_probability(static_cast<Letter>(a));
  std::vector<double> next(pi.size());
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        next[b] += pi[a] * density.transition(static_cast<Letter>(a), static_cast<Letter>(b));
      }
    }
    double change = 0.0;
    for (int a = 0; a < n; ++a) change += std::abs(next[a] - pi[a]);
    pi.swap(next);
    if (change < 1e-15) break;
  }
  double mean = 0.0;
  for (int a = 0; a < n; ++a) mean += pi[a] * model.weight(static_cast<Letter>(a));
  return mean;
}

double flow_normalization(const ConformalDensity& density) {
  double diagonal = 0.0;
  for (int a = 0; a < density.model().alphabet_size(); ++a) {
    double p = density.first_letter_probability(static_cast<Letter>(a));
    diagonal += p * p;
  }
  return 1.0 / (mean_step_length(density) * (1.0 - diagonal));
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t kernel_depth(const KernelStep& f) {
  std::size_t depth = 0;
  for (const auto& [u, row] : f.rows()) depth = std::max({depth, u.size(), row->depth()});
  return depth;
}

// A point that follows xi for `keep` letters and then leaves it.
BoundaryPoint perturb(const GroupModel& model, const BoundaryPoint& xi, std::size_t keep) {
  std::vector<Letter> letters = xi.prefix_letters(keep);
  Letter avoid = xi.letter(keep);
  for (int s = 0; s < model.alphabet_size(); ++s) {
    auto letter = static_cast<Letter>(s);
    if (letter == avoid) continue;
    if (!letters.empty() && !model.can_follow(letters.back(), letter)) continue;
    letters.push_back(letter);
    break;
  }
  return BoundaryPoint::closing(model, model.from_letters(letters));
}

}  // namespace

ExperimentReport ergodic_experiment(const ConformalDensity& density, const KernelStep& f,
                                    const ErgodicParameters& params) {
  const GroupModel& model = density.model();
  if (params.pairs == 0) throw std::invalid_argument("need at least one sampled pair");
  if (params.t_grid.empty()) throw std::invalid_argument("T grid is empty");
  double M = f.support_reach(model);
  if (!std::isfinite(M)) throw std::invalid_argument("f must vanish near the diagonal");
  double target = bms_integral(density, f);
  double c = flow_normalization(density);
  double t_max = *std::max_element(params.t_grid.begin(), params.t_grid.end());
  double margin = static_cast<double>(kernel_depth(f) + 2) * model.max_weight();

  ExperimentReport report("ergodic", {"pair_id", "T", "J", "rel_error", "contraction"});
  report.parameters["pairs"] = static_cast<std::int64_t>(params.pairs);
  report.parameters["t_grid"] = params.t_grid;
  report.parameters["a"] = params.a;
  report.parameters["support_reach"] = M;
  report.parameters["cap"] = static_cast<std::int64_t>(params.cap);

  // Pairs come from mu x mu conditioned on distinct first letters, which is
  // m restricted to {(xi, eta) = 0} and normalised.
  Rng rng(params.seed);
  std::vector<std::pair<BoundaryPoint, BoundaryPoint>> pairs;
  double reach_eta = params.a + t_max + M + margin;
  double reach_xi = std::max(0.0, -params.a) + M + margin;
  while (pairs.size() < params.pairs) {
    BoundaryPoint xi = sample_point(density, reach_xi, rng);
    BoundaryPoint eta = sample_point(density, reach_eta, rng);
    if (xi.letter(0) == eta.letter(0)) continue;
    pairs.emplace_back(std::move(xi), std::move(eta));
  }

  struct PairResult {
    std::vector<double> j;
    double contraction = 0.0;
  };
  std::vector<PairResult> results(pairs.size());
  VisualMetric vm = density.metric();
  for_each_chunk(pairs.size(), 1, params.threads, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& [xi, eta] = pairs[i];
      for (double T : params.t_grid) {
        results[i].j.push_back(hopf_average(density, f, xi, eta, params.a, T, TubeBand::Sigma,
                                            params.cap));
      }
      BoundaryPoint xi2 = perturb(model, xi, 2);
      double worst = 0.0;
      for (const auto& e : tube_enumerate(density, xi, eta, params.a, params.a + t_max, M,
                                          TubeBand::Sigma, params.cap)) {
        double d = visual_distance(model, vm, act(model, e.g, xi), act(model, e.g, xi2));
        worst = std::max(worst, d * std::exp(density.epsilon() * e.sigma));
      }
      results[i].contraction = worst;
    }
  });

  std::vector<double> median_error;
  std::vector<double> median_j;
  double contraction = 0.0;
  for (std::size_t k = 0; k < params.t_grid.size(); ++k) {
    std::vector<double> js;
    std::vector<double> errs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double j = results[i].j[k];
      double err = target != 0.0 ? std::abs(j - target) / std::abs(target) : std::abs(j);
      report.add_row({static_cast<std::int64_t>(i), params.t_grid[k], j, err, results[i].contraction});
      js.push_back(j);
      errs.push_back(err);
    }
    median_j.push_back(median(js));
    median_error.push_back(median(errs));
  }
  bool nonincreasing = true;
  for (std::size_t k = 1; k < median_error.size(); ++k) {
    if (median_error[k] > median_error[k - 1]) nonincreasing = false;
  }
  for (const auto& r : results) contraction = std::max(contraction, r.contraction);
  double flow_target = c * target;
  report.summary["target"] = target;
  report.summary["median_J"] = median_j;
  report.summary["median_rel_error"] = median_error;
  report.summary["median_J_at_max_T"] = median_j.back();
  report.summary["rel_error_at_max_T"] = median_error.back();
  report.summary["error_nonincreasing"] = nonincreasing;
  report.summary["flow_normalization"] = c;
  report.summary["flow_target"] = flow_target;
  report.summary["rel_error_to_flow_target"] = std::abs(median_j.back() - flow_target) / flow_target;
  report.summary["max_contraction"] = contraction;
  return report;
}

namespace {

// Follows `prefix`, leaves it at the next letter unless `avoid` forbids, adds
// a few random letters and a random period.
BoundaryPoint branch_point(const GroupModel& model, std::vector<Letter> prefix,
                           std::optional<Letter> avoid, Rng& rng) {
  std::uniform_int_distribution<int> letter_dist(0, model.alphabet_size() - 1);
  std::uniform_int_distribution<int> extra_dist(1, 3);
  int extra = extra_dist(rng);
  bool first = true;
  while (extra > 0) {
    auto s = static_cast<Letter>(letter_dist(rng));
    if (!prefix.empty() && !model.can_follow(prefix.back(), s)) continue;
    if (first && avoid && s == *avoid) continue;
    prefix.push_back(s);
    first = false;
    --extra;
  }
  ReducedWord head = model.from_letters(prefix);
  while (true) {
    ReducedWord period = random_word(model, 1, 3, rng);
    if (model.inverse(period.front()) == period.back()) continue;
    if (model.inverse(period.front()) == head.back()) continue;
    return BoundaryPoint(model, head, period);
  }
}

}  // namespace

ExperimentReport tau_sigma_gap_report(const ConformalDensity& density, double M,
                                      std::size_t samples, std::uint64_t seed) {
  const GroupModel& model = density.model();
  ExperimentReport report("tau-sigma-gap", {"trial", "g", "xi", "eta", "cp", "image_cp", "gap"});
  report.parameters["M"] = M;
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  Rng rng(seed);
  double worst = 0.0;
  std::size_t draws = 0;
  for (std::size_t trial = 0; trial < samples;) {
    ++draws;
    ReducedWord g = random_word(model, 0, 6, rng);
    ReducedWord g_inv = model.invert(g);
    std::vector<Letter> x(g_inv.letters().begin(), g_inv.letters().end());
    std::uniform_int_distribution<std::size_t> cut(0, x.size());
    std::size_t i = cut(rng);
    std::size_t j = cut(rng);
    auto branch = [&](std::size_t n) {
      std::optional<Letter> avoid;
      if (n < x.size()) avoid = x[n];
      return branch_point(model, std::vector<Letter>(x.begin(), x.begin() + static_cast<long>(n)),
                          avoid, rng);
    };
    BoundaryPoint xi = branch(i);
    BoundaryPoint eta = branch(j);
    if (xi == eta) continue;
    double cp = gromov_bb(model, xi, eta);
    double image_cp = gromov_bb(model, act(model, g, xi), act(model, g, eta));
    if (!(cp < M) || !(image_cp < M)) continue;
    double gap = std::abs(tau(model, g, xi, eta) - sigma(model, g, eta));
    worst = std::max(worst, gap);
    report.add_row({static_cast<std::int64_t>(trial), model.format(g), xi.format(model),
                    eta.format(model), cp, image_cp, gap});
    ++trial;
  }
  report.summary["max_gap"] = worst;
  report.summary["bound"] = 2.0 * M;
  report.summary["within_bound"] = worst <= 2.0 * M + 1e-9;
  report.summary["draws"] = static_cast<std::int64_t>(draws);
  return report;
}

bool properness_hit(const ConformalDensity& density, const ReducedWord& g, double theta, double k) {
  if (!(theta > 0.0) || !(k > 0.0)) throw std::invalid_argument("theta and k must be positive");
  const GroupModel& model = density.model();
  double m_theta = -std::log(theta) / density.epsilon();
  ReducedWord x = model.invert(g);
  std::vector<double> W(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) W[i + 1] = W[i] + model.weight(x[i]);
  // Let xi leave x after i letters and eta after j >= i. The best choice
  // makes (xi, eta) = W(i); then (g xi, g eta) = |x| - W(j), and the time
  // windows overlap iff |tau| = W(j) - W(i) < 2k.
  for (std::size_t i = 0; i <= x.size(); ++i) {
    for (std::size_t j = i; j <= x.size(); ++j) {
      double cp = W[i];
      double image_cp = x.wlen() - W[j];
      if (cp < m_theta && image_cp < m_theta && W[j] - W[i] < 2.0 * k) return true;
    }
  }
  return false;
}

ExperimentReport properness_report(const ConformalDensity& density, double theta, double k,
                                   std::size_t max_letters, std::size_t cap) {
  const GroupModel& model = density.model();
  ExperimentReport report("properness", {"letters", "words", "hits", "max_hit_length"});
  report.parameters["theta"] = theta;
  report.parameters["k"] = k;
  report.parameters["max_letters"] = static_cast<std::int64_t>(max_letters);
  report.parameters["cap"] = static_cast<std::int64_t>(cap);
  double m_theta = theta < 1.0 ? -std::log(theta) / density.epsilon() : 0.0;
  double radius_bound = theta < 1.0 ? 2.0 * m_theta + 2.0 * k : 0.0;
  std::size_t visited = 0;
  std::size_t hits = 0;
  double max_hit = -1.0;
  std::size_t beyond = 0;
  for (std::size_t n = 0; n <= max_letters; ++n) {
    std::size_t words = 0;
    std::size_t level_hits = 0;
    double level_max = -1.0;
    model.for_each_of_letter_length(n, [&](const ReducedWord& g) {
      if (++visited > cap) throw CapExceeded("properness enumeration exceeded the cap");
      ++words;
      if (properness_hit(density, g, theta, k)) {
        ++level_hits;
        level_max = std::max(level_max, g.wlen());
        if (!model.length_less(g.wlen(), radius_bound)) ++beyond;
      }
    });
    hits += level_hits;
    max_hit = std::max(max_hit, level_max);
    report.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(words),
                    static_cast<std::int64_t>(level_hits), level_max});
  }
  report.summary["hit_count"] = static_cast<std::int64_t>(hits);
  report.summary["max_hit_length"] = max_hit;
  report.summary["radius_bound"] = radius_bound;
  report.summary["hits_beyond_bound"] = static_cast<std::int64_t>(beyond);
  report.summary["enumerated_radius"] = static_cast<double>(max_letters) * model.min_weight();
  return report;
}

ExperimentReport cocycle_report(const ConformalDensity& density, std::size_t samples,
                                std::uint64_t seed) {
  const GroupModel& model = density.model();
  ExperimentReport report("cocycle", {"trial", "g", "h", "xi", "eta", "tau_cocycle_error",
                                      "sigma_cocycle_error", "rho_sigma_error", "chain_rule_error"});
  report.parameters["samples"] = static_cast<std::int64_t>(samples);
  Rng rng(seed);
  double tau_err = 0.0;
  double sigma_err = 0.0;
  double rho_err = 0.0;
  double chain_err = 0.0;
  for (std::size_t trial = 0; trial < samples;) {
    ReducedWord g = random_word(model, 0, 6, rng);
    ReducedWord h = random_word(model, 0, 6, rng);
    BoundaryPoint xi = random_point(model, 4, 3, rng);
    BoundaryPoint eta = random_point(model, 4, 3, rng);
    if (xi == eta) continue;
    ReducedWord gh = model.multiply(g, h);
    BoundaryPoint hxi = act(model, h, xi);
    BoundaryPoint heta = act(model, h, eta);
    double e1 = std::abs(tau(model, gh, xi, eta) - tau(model, g, hxi, heta) - tau(model, h, xi, eta));
    double e2 = std::abs(sigma(model, gh, xi) - sigma(model, g, hxi) - sigma(model, h, xi));
    double e3 = std::abs(rho(density, g, xi) - sigma(model, g, xi));
    double lhs = density.rn_derivative(gh, xi);
    double rhs = density.rn_derivative(g, xi) *
                 density.rn_derivative(h, act(model, model.invert(g), xi));
    double e4 = std::abs(lhs / rhs - 1.0);
    tau_err = std::max(tau_err, e1);
    sigma_err = std::max(sigma_err, e2);
    rho_err = std::max(rho_err, e3);
    chain_err = std::max(chain_err, e4);
    report.add_row({static_cast<std::int64_t>(trial), model.format(g), model.format(h),
                    xi.format(model), eta.format(model), e1, e2, e3, e4});
    ++trial;
  }
  report.summary["max_tau_cocycle_error"] = tau_err;
  report.summary["max_sigma_cocycle_error"] = sigma_err;
  report.summary["max_rho_sigma_error"] = rho_err;
  report.summary["max_chain_rule_error"] = chain_err;
  return report;
}

ExperimentReport bms_invariance_report(const ConformalDensity& density, std::size_t trials,
                                       std::uint64_t seed) {
  const GroupModel& model = density.model();
  ExperimentReport report("bms", {"trial", "g", "u", "v", "mass", "image_mass", "abs_error", "pieces"});
  report.parameters["trials"] = static_cast<std::int64_t>(trials);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < trials;) {
    ReducedWord g = random_word(model, 1, 6, rng);
    Cylinder u{random_word(model, 1, 4, rng)};
    Cylinder v{random_word(model, 1, 4, rng)};
    if (!u.disjoint_from(v)) continue;
    ProductCylinder pc{u, v};
    std::size_t pieces = 0;
    double mass = bms_mass(density, pc);
    double image = bms_image_mass(density, g, pc, &pieces);
    double err = std::abs(image - mass);
    worst = std::max(worst, err);
    report.add_row({static_cast<std::int64_t>(trial), model.format(g), model.format(u.prefix),
                    model.format(v.prefix), mass, image, err, static_cast<std::int64_t>(pieces)});
    ++trial;
  }
  report.summary["max_abs_error"] = worst;
  if (model.rank() >= 2) {
    report.summary["m_a_b"] =
        bms_mass(density, ProductCylinder{Cylinder{model.word("a")}, Cylinder{model.word("b")}});
    report.summary["m_ab_aB"] =
        bms_mass(density, ProductCylinder{Cylinder{model.word("ab")}, Cylinder{model.word("aB")}});
  }
  return report;
}

ExperimentReport tube_census_report(const ConformalDensity& density, const BoundaryPoint& xi,
                                    const BoundaryPoint& eta, double M,
                                    const std::vector<double>& lengths, std::size_t cap) {
  ExperimentReport report("tube-census", {"L", "count", "count_per_length"});
  report.parameters["xi"] = xi.format(density.model());
  report.parameters["eta"] = eta.format(density.model());
  report.parameters["M"] = M;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double L : lengths) {
    auto tube = tube_enumerate(density, xi, eta, 0.0, L, M, TubeBand::Sigma, cap);
    double rate = static_cast<double>(tube.size()) / L;
    if (L >= 10.0) {
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
    }
    report.add_row({L, static_cast<std::int64_t>(tube.size()), rate});
  }
  report.summary["min_rate"] = lo;
  report.summary["max_rate"] = hi;
  return report;
}

}  // namespace boundary_lab
