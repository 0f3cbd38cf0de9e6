#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "boundary_lab/density.hpp"

namespace boundary_lab {

struct ModelSpec {
  int rank = 2;
  std::vector<double> weights{1.0, 1.0};

  GroupModel build() const;
};

// Every knob any experiment reads. Defaults reproduce the canonical runs.
struct RunConfig {
  ModelSpec model;
  // Either epsilon directly, or epsilon = h / dimension.
  std::optional<double> epsilon;
  double dimension = 2.0;
  // Defaults to 1.5 times the largest generator weight.
  std::optional<double> sigma0;

  double alpha = 1.5;
  double C = 1.5;
  double tau_prime = 2.0;

  double R_max = 8.0;
  std::vector<double> growth_radii{2, 3, 4, 5, 6, 7, 8, 9};
  int density_depth = 6;
  int poincare_levels = 12;

  std::size_t samples = 1000;
  double ahlfors_k_max = 6.0;
  bool ahlfors_integer_k = false;

  double cone_R = 6.0;
  std::vector<double> cone_s{0, 1, 2, 3, 4};
  double cover_R = 5.0;

  int mc_n_min = 2;
  int mc_n_max = 10;
  int profile_depth = 12;

  std::vector<double> sr_radii{3, 4, 5, 6};
  int basis_depth = 2;
  std::size_t mc_trials = 200;

  std::vector<double> rho_k{1, 2, 3, 4, 5, 6};
  int projection_profile_depth = 7;

  std::size_t cocycle_samples = 10000;
  double gap_M = 2.0;
  std::size_t gap_samples = 10000;
  std::size_t bms_trials = 1000;

  double theta = 0.9;
  double k = 0.5;
  int properness_letters = 8;

  std::size_t pairs = 50;
  std::vector<double> t_grid{25, 50, 100, 200};
  double window_start = 0.0;

  ModelSpec second_model{2, {1.0, 2.0}};
  int classify_R_max = 10;
  int classify_depth = 8;
  std::size_t holder_samples = 2000;

  std::uint64_t seed = 1;
  std::size_t cap = 50'000'000;
  int threads = 1;

  // Throws std::invalid_argument on unknown keys, wrong types, or values out
  // of range.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::ordered_json to_json() const;
  void validate() const;

  double resolved_sigma0() const;
  // Builds the density; fails when epsilon is not below h.
  ConformalDensity density() const;
};

}  // namespace boundary_lab
