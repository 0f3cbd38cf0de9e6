#include "boundary_lab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "boundary_lab/classify.hpp"
#include "boundary_lab/errors.hpp"
#include "boundary_lab/flow.hpp"
#include "boundary_lab/kernels.hpp"
#include "boundary_lab/koopman.hpp"
#include "boundary_lab/lemmas.hpp"
#include "boundary_lab/verify.hpp"

namespace boundary_lab {

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "exponent", "density",  "shadow",     "ahlfors",   "growth",      "cone",
      "cover",    "matrix-coeff", "p1norm", "kernel-convergence", "sr-norm", "projection",
      "cocycle",  "bms",      "properness", "ergodic",   "classify",    "verify-all"};
  return names;
}

bool is_subcommand(const std::string& name) {
  const auto& names = subcommands();
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

ExperimentReport exponent_report(const RunConfig& config) {
  GroupModel model = config.model.build();
  double h = critical_exponent(model);
  ExperimentReport report("exponent", {"s", "spectral_radius"});
  for (double f : {0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5}) {
    report.add_row({f * h, spectral_radius(model, f * h)});
  }
  ConformalDensity density = config.density();
  report.summary["h"] = h;
  report.summary["epsilon"] = density.epsilon();
  report.summary["dimension"] = density.dimension();
  return report;
}

ExperimentReport density_report(const RunConfig& config) {
  ConformalDensity density = config.density();
  const GroupModel& model = density.model();
  ExperimentReport report("density", {"cylinder", "letters", "mu", "children_sum",
                                      "additivity_error", "poincare"});
  report.parameters["density_depth"] = config.density_depth;
  report.parameters["poincare_levels"] = config.poincare_levels;
  double s = density.h() + 0.01;
  report.parameters["poincare_exponent"] = s;
  double worst_additivity = 0.0;
  double worst_poincare = 0.0;
  for (int n = 1; n <= config.density_depth; ++n) {
    model.for_each_of_letter_length(static_cast<std::size_t>(n), [&](const ReducedWord& w) {
      double mu = density.mu(Cylinder{w});
      double children = 0.0;
      for (int b = 0; b < model.alphabet_size(); ++b) {
        auto letter = static_cast<Letter>(b);
        if (model.can_follow(w.back(), letter)) children += density.mu(Cylinder{model.extend(w, letter)});
      }
      double err = std::abs(mu - children);
      worst_additivity = std::max(worst_additivity, err);
      Cell poincare = std::string();
      if (n == 1) {
        double p = poincare_truncated(model, s, config.poincare_levels, Cylinder{w});
        worst_poincare = std::max(worst_poincare, std::abs(p - mu));
        poincare = p;
      }
      report.add_row({model.format(w), static_cast<std::int64_t>(n), mu, children, err, poincare});
    });
  }
  report.summary["h"] = density.h();
  report.summary["normalizer"] = density.normalizer();
  report.summary["max_additivity_error"] = worst_additivity;
  report.summary["max_poincare_error_depth1"] = worst_poincare;
  return report;
}

SrParameters sr_parameters(const RunConfig& config) {
  SrParameters p;
  p.alpha = config.alpha;
  p.C = config.C;
  p.tau_prime = config.tau_prime;
  p.sigma0 = config.resolved_sigma0();
  p.cap = config.cap;
  p.threads = config.threads;
  p.basis_depth = config.basis_depth;
  return p;
}

ExperimentReport projection_report(const RunConfig& config) {
  ConformalDensity density = config.density();
  const GroupModel& model = density.model();
  StepFunction E = StepFunction::indicator(model, Cylinder{model.word("a")});
  StepFunction profile = distance_profile(
      density, BoundaryPoint::parse(model, "", "a"),
      static_cast<std::size_t>(config.projection_profile_depth));
  std::vector<StepFunction> tests{profile + StepFunction::constant(model, 1.0),
                                  StepFunction::indicator(model, Cylinder{model.word("ab")})};
  std::vector<double> rhos;
  for (double k : config.rho_k) rhos.push_back(std::exp(-density.epsilon() * k));
  ExperimentReport report = projection_approx_report(density, E, tests, rhos);
  report.parameters["rho_k"] = config.rho_k;
  double prev = std::numeric_limits<double>::infinity();
  bool nonincreasing = true;
  double last = 0.0;
  for (const auto& row : report.rows) {
    double err = std::get<double>(row[1]);
    if (err > prev + 1e-12) nonincreasing = false;
    prev = err;
    last = err;
  }
  report.summary["error_nonincreasing"] = nonincreasing;
  report.summary["final_error"] = last;
  return report;
}

ExperimentReport cocycle_with_gap(const RunConfig& config) {
  ConformalDensity density = config.density();
  ExperimentReport report = cocycle_report(density, config.cocycle_samples, config.seed);
  ExperimentReport gap = tau_sigma_gap_report(density, config.gap_M, config.gap_samples, config.seed + 1);
  report.parameters["gap_M"] = config.gap_M;
  report.parameters["gap_samples"] = static_cast<std::int64_t>(config.gap_samples);
  report.summary["max_tau_sigma_gap"] = gap.summary["max_gap"];
  report.summary["tau_sigma_gap_bound"] = gap.summary["bound"];
  return report;
}

}  // namespace

ExperimentReport build_report(const std::string& sub, const RunConfig& config) {
  if (sub == "exponent") return exponent_report(config);
  if (sub == "density") return density_report(config);
  if (sub == "growth") {
    GroupModel model = config.model.build();
    return growth_report(model, critical_exponent(model), config.alpha, config.growth_radii, config.cap);
  }
  ConformalDensity density = config.density();
  const GroupModel& model = density.model();
  double sigma0 = config.resolved_sigma0();
  if (sub == "shadow") return shadow_lemma_report(density, sigma0, config.R_max, config.cap);
  if (sub == "ahlfors") {
    return ahlfors_report(density, config.samples, config.ahlfors_k_max, config.ahlfors_integer_k,
                          config.seed);
  }
  if (sub == "cone") {
    return cone_report(density, config.cone_R, config.alpha, config.cone_s, config.samples,
                       config.seed, config.cap);
  }
  if (sub == "cover") {
    return cover_multiplicity_report(density, config.cover_R, config.alpha, sigma0, config.samples,
                                     config.seed, config.cap);
  }
  if (sub == "matrix-coeff") {
    StepFunction phi = StepFunction::indicator(model, Cylinder{model.word("a")});
    StepFunction psi = distance_profile(density, BoundaryPoint::parse(model, "", "b"),
                                        static_cast<std::size_t>(config.profile_depth));
    ExperimentReport r =
        matrix_coefficient_decay_report(density, phi, psi, config.mc_n_min, config.mc_n_max, config.cap);
    r.parameters["profile_depth"] = config.profile_depth;
    return r;
  }
  if (sub == "p1norm") return p1_norm_report(density, config.R_max, config.cap);
  if (sub == "kernel-convergence" || sub == "sr-norm") {
    KernelStep K = KernelStep::constant(model, 1.0);
    SrSweep sweep = sr_sweep(density, K, sr_parameters(config), config.sr_radii, config.mc_trials,
                             config.seed);
    return sub == "sr-norm" ? sweep.norms : sweep.convergence;
  }
  if (sub == "projection") return projection_report(config);
  if (sub == "cocycle") return cocycle_with_gap(config);
  if (sub == "bms") return bms_invariance_report(density, config.bms_trials, config.seed);
  if (sub == "properness") {
    return properness_report(density, config.theta, config.k,
                             static_cast<std::size_t>(config.properness_letters), config.cap);
  }
  if (sub == "ergodic") {
    KernelStep f = KernelStep::rectangle(model, Cylinder{model.word("a")}, Cylinder{model.word("b")});
    ErgodicParameters p;
    p.pairs = config.pairs;
    p.t_grid = config.t_grid;
    p.a = config.window_start;
    p.seed = config.seed;
    p.cap = config.cap;
    p.threads = config.threads;
    return ergodic_experiment(density, f, p);
  }
  if (sub == "classify") {
    auto pairs = constructed_pairs();
    pairs.push_back({"config", config.model.weights, config.second_model.weights, std::nullopt});
    return classify_report(pairs, config.dimension, config.classify_R_max, config.classify_depth,
                           config.holder_samples, config.seed, config.cap);
  }
  throw std::invalid_argument("unknown subcommand: " + sub);
}

void write_report(const ExperimentReport& report, const RunConfig& config,
                  const std::filesystem::path& out, double wall_seconds) {
  std::filesystem::create_directories(out);
  {
    std::ofstream csv(out / (report.name + ".csv"), std::ios::binary);
    csv << report.to_csv();
    if (!csv) throw std::runtime_error("cannot write " + (out / (report.name + ".csv")).string());
  }
  nlohmann::ordered_json j;
  j["report"] = report.name;
  j["version"] = kVersion;
  j["wall_time_seconds"] = wall_seconds;
  j["config"] = config.to_json();
  j["parameters"] = report.parameters;
  j["columns"] = report.columns;
  j["row_count"] = report.rows.size();
  j["summary"] = report.summary;
  std::ofstream js(out / (report.name + ".json"), std::ios::binary);
  js << j.dump(2) << "\n";
  if (!js) throw std::runtime_error("cannot write " + (out / (report.name + ".json")).string());
}

int run(const std::string& sub, const RunConfig& config, const std::filesystem::path& out,
        std::ostream& log) {
  if (!is_subcommand(sub)) {
    log << "unknown subcommand: " << sub << "\n";
    return kExitUsage;
  }
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    if (sub == "verify-all") {
      std::vector<CriterionResult> results = run_acceptance(config, &log);
      ExperimentReport report = acceptance_report(results);
      report.name = "verify-all";
      write_report(report, config, out, elapsed());
      bool ok = std::all_of(results.begin(), results.end(),
                            [](const CriterionResult& r) { return r.diagnostic || r.passed; });
      return ok ? kExitOk : kExitFailure;
    }
    ExperimentReport report = build_report(sub, config);
    report.name = sub;
    write_report(report, config, out, elapsed());
    log << sub << ": " << report.rows.size() << " rows written to " << out.string() << "\n";
    return kExitOk;
  } catch (const CapExceeded& e) {
    log << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const InvariantViolation& e) {
    log << "invariant violated: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    log << "invalid input: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace boundary_lab
