#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "boundary_lab/config.hpp"
#include "boundary_lab/report.hpp"

namespace boundary_lab {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  // Informational lines that are printed but never gate the exit code.
  bool diagnostic = false;
  double seconds = 0.0;
};

// The acceptance suite on the canonical models (rank 2, weights (1,1) and
// (1,2)). Seed, thread count and cap come from `config`; the models and
// tolerances are fixed. One line per criterion goes to `progress` as each
// finishes.
std::vector<CriterionResult> run_acceptance(const RunConfig& config, std::ostream* progress);

ExperimentReport acceptance_report(const std::vector<CriterionResult>& results);

std::string format_result(const CriterionResult& r);

}  // namespace boundary_lab
