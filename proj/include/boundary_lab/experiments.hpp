#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "boundary_lab/config.hpp"
#include "boundary_lab/report.hpp"

namespace boundary_lab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitFailure = 2,
  kExitCap = 3,
};

const std::vector<std::string>& subcommands();
bool is_subcommand(const std::string& name);

// Runs one experiment and returns its report. verify-all is not handled here.
ExperimentReport build_report(const std::string& subcommand, const RunConfig& config);

// <out>/<name>.csv and <out>/<name>.json with the config echo, version and
// wall time in the header.
void write_report(const ExperimentReport& report, const RunConfig& config,
                  const std::filesystem::path& out, double wall_seconds);

// Full run with error mapping: 0 ok, 2 invalid config or failed invariant,
// 3 cap exhausted. Messages go to `log`.
int run(const std::string& subcommand, const RunConfig& config, const std::filesystem::path& out,
        std::ostream& log);

}  // namespace boundary_lab
