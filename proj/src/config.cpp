#include "boundary_lab/config.hpp"

#include <fstream>
#include <algorithm>
#include <set>
#include <stdexcept>

namespace boundary_lab {

GroupModel ModelSpec::build() const {
  if (static_cast<std::size_t>(rank) != weights.size()) {
    throw std::invalid_argument("model weights must list one weight per generator");
  }
  return GroupModel(rank, weights);
}

namespace {

void from_json_model(const nlohmann::json& j, ModelSpec& m) {
  if (!j.is_object()) throw std::invalid_argument("model must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "rank" && key != "weights") throw std::invalid_argument("unknown model key: " + key);
  }
  if (j.contains("rank")) m.rank = j.at("rank").get<int>();
  if (j.contains("weights")) m.weights = j.at("weights").get<std::vector<double>>();
  if (!j.contains("weights")) m.weights.assign(static_cast<std::size_t>(m.rank), 1.0);
}

nlohmann::ordered_json model_json(const ModelSpec& m) {
  return {{"rank", m.rank}, {"weights", m.weights}};
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  RunConfig c;
  std::set<std::string> known;
  auto read = [&](const char* key, auto& field) {
    known.insert(key);
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
      using T = std::decay_t<decltype(field)>;
      field = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument(std::string("config key has the wrong type: ") + key);
    }
  };
  auto read_optional = [&](const char* key, std::optional<double>& field) {
    known.insert(key);
    if (!j.contains(key) || j.at(key).is_null()) return;
    if (!j.at(key).is_number()) throw std::invalid_argument(std::string("config key must be a number: ") + key);
    field = j.at(key).get<double>();
  };
  known.insert("model");
  known.insert("second_model");
  try {
    if (j.contains("model")) from_json_model(j.at("model"), c.model);
    if (j.contains("second_model")) from_json_model(j.at("second_model"), c.second_model);
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("model spec has the wrong shape");
  }
  read_optional("epsilon", c.epsilon);
  read("dimension", c.dimension);
  read_optional("sigma0", c.sigma0);
  read("alpha", c.alpha);
  read("C", c.C);
  read("tau_prime", c.tau_prime);
  read("R_max", c.R_max);
  read("growth_radii", c.growth_radii);
  read("density_depth", c.density_depth);
  read("poincare_levels", c.poincare_levels);
  read("samples", c.samples);
  read("ahlfors_k_max", c.ahlfors_k_max);
  read("ahlfors_integer_k", c.ahlfors_integer_k);
  read("cone_R", c.cone_R);
  read("cone_s", c.cone_s);
  read("cover_R", c.cover_R);
  read("mc_n_min", c.mc_n_min);
  read("mc_n_max", c.mc_n_max);
  read("profile_depth", c.profile_depth);
  read("sr_radii", c.sr_radii);
  read("basis_depth", c.basis_depth);
  read("mc_trials", c.mc_trials);
  read("rho_k", c.rho_k);
  read("projection_profile_depth", c.projection_profile_depth);
  read("cocycle_samples", c.cocycle_samples);
  read("gap_M", c.gap_M);
  read("gap_samples", c.gap_samples);
  read("bms_trials", c.bms_trials);
  read("theta", c.theta);
  read("k", c.k);
  read("properness_letters", c.properness_letters);
  read("pairs", c.pairs);
  read("t_grid", c.t_grid);
  read("window_start", c.window_start);
  read("classify_R_max", c.classify_R_max);
  read("classify_depth", c.classify_depth);
  read("holder_samples", c.holder_samples);
  read("seed", c.seed);
  read("cap", c.cap);
  read("threads", c.threads);
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key: " + key);
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model_json(model);
  j["epsilon"] = epsilon ? nlohmann::ordered_json(*epsilon) : nlohmann::ordered_json(nullptr);
  j["dimension"] = dimension;
  j["sigma0"] = resolved_sigma0();
  j["alpha"] = alpha;
  j["C"] = C;
  j["tau_prime"] = tau_prime;
  j["R_max"] = R_max;
  j["growth_radii"] = growth_radii;
  j["density_depth"] = density_depth;
  j["poincare_levels"] = poincare_levels;
  j["samples"] = samples;
  j["ahlfors_k_max"] = ahlfors_k_max;
  j["ahlfors_integer_k"] = ahlfors_integer_k;
  j["cone_R"] = cone_R;
  j["cone_s"] = cone_s;
  j["cover_R"] = cover_R;
  j["mc_n_min"] = mc_n_min;
  j["mc_n_max"] = mc_n_max;
  j["profile_depth"] = profile_depth;
  j["sr_radii"] = sr_radii;
  j["basis_depth"] = basis_depth;
  j["mc_trials"] = mc_trials;
  j["rho_k"] = rho_k;
  j["projection_profile_depth"] = projection_profile_depth;
  j["cocycle_samples"] = cocycle_samples;
  j["gap_M"] = gap_M;
  j["gap_samples"] = gap_samples;
  j["bms_trials"] = bms_trials;
  j["theta"] = theta;
  j["k"] = k;
  j["properness_letters"] = properness_letters;
  j["pairs"] = pairs;
  j["t_grid"] = t_grid;
  j["window_start"] = window_start;
  j["second_model"] = model_json(second_model);
  j["classify_R_max"] = classify_R_max;
  j["classify_depth"] = classify_depth;
  j["holder_samples"] = holder_samples;
  j["seed"] = seed;
  j["cap"] = cap;
  j["threads"] = threads;
  return j;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  model.build();
  second_model.build();
  require(second_model.rank == model.rank, "second_model must have the same rank as model");
  require(!epsilon || *epsilon > 0.0, "epsilon must be positive");
  require(dimension > 1.0, "dimension must exceed 1");
  require(!sigma0 || *sigma0 > 0.0, "sigma0 must be positive");
  require(alpha > 0.0 && C > 0.0, "alpha and C must be positive");
  require(tau_prime >= 0.0, "tau_prime must be nonnegative");
  require(R_max > 0.0, "R_max must be positive");
  require(growth_radii.size() >= 2, "growth needs at least two radii");
  require(density_depth >= 1 && poincare_levels >= 1, "depths must be positive");
  require(samples > 0 && mc_trials > 0 && cocycle_samples > 0 && gap_samples > 0 &&
              bms_trials > 0 && pairs > 0 && holder_samples > 1,
          "sample counts must be positive");
  require(ahlfors_k_max >= 0.0, "ahlfors_k_max must be nonnegative");
  require(mc_n_min >= 1 && mc_n_max > mc_n_min, "matrix-coefficient annuli need n_min < n_max");
  require(profile_depth >= 1 && projection_profile_depth >= 1, "profile depths must be positive");
  require(!sr_radii.empty() && !rho_k.empty() && !t_grid.empty() && !cone_s.empty(),
          "grids must be nonempty");
  require(basis_depth >= 1 && basis_depth <= 6, "basis_depth must be in 1..6");
  require(theta > 0.0 && k > 0.0, "theta and k must be positive");
  require(properness_letters >= 0, "properness_letters must be nonnegative");
  require(gap_M > 0.0, "gap_M must be positive");
  for (double t : t_grid) require(t > 0.0, "t_grid entries must be positive");
  require(classify_R_max >= 2 && classify_depth >= 2, "classification ranges too small");
  require(cap > 0, "cap must be positive");
  require(threads >= 1, "threads must be at least 1");
}

double RunConfig::resolved_sigma0() const {
  if (sigma0) return *sigma0;
  double w = 0.0;
  for (double x : model.weights) w = std::max(w, x);
  return 1.5 * w;
}

ConformalDensity RunConfig::density() const {
  GroupModel m = model.build();
  double eps = epsilon ? *epsilon : critical_exponent(m) / dimension;
  return ConformalDensity::build(m, eps);
}

}  // namespace boundary_lab
