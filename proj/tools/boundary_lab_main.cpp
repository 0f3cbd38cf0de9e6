#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "boundary_lab/config.hpp"
#include "boundary_lab/experiments.hpp"

namespace bl = boundary_lab;

int main(int argc, char** argv) {
  CLI::App app{"Exact Patterson-Sullivan and Koopman experiments on weighted free groups"};
  app.set_version_flag("--version", bl::kVersion);
  std::string subcommand;
  std::string config_path;
  std::string out = "reports";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string names;
  for (const auto& s : bl::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", subcommand, "One of: " + names)->required();
  app.add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--threads", threads, "Override the configured thread count")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? bl::kExitOk : bl::kExitUsage;
  }
  if (!bl::is_subcommand(subcommand)) {
    std::cerr << "unknown subcommand: " << subcommand << "\n" << app.help();
    return bl::kExitUsage;
  }

  bl::RunConfig config;
  try {
    if (!config_path.empty()) config = bl::RunConfig::load(config_path);
    if (seed) config.seed = *seed;
    if (threads) config.threads = *threads;
    config.validate();
    config.density();  // rejects epsilon >= h before any work starts
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return bl::kExitFailure;
  }
  return bl::run(subcommand, config, out, std::cerr);
}
