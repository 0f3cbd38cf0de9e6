// Acceptance runner: one line per criterion, nonzero exit if any gating
// criterion fails.
#include <algorithm>
#include <iostream>

#include "boundary_lab/config.hpp"
#include "boundary_lab/verify.hpp"

int main() {
  boundary_lab::RunConfig config;
  auto results = boundary_lab::run_acceptance(config, &std::cout);
  auto gating = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.diagnostic; });
  auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) {
    return !r.diagnostic && !r.passed;
  });
  std::cout << (gating - failed) << " of " << gating << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
