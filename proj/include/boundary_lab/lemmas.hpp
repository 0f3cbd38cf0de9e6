#pragma once

#include <cstdint>
#include <vector>

#include "boundary_lab/density.hpp"
#include "boundary_lab/report.hpp"

namespace boundary_lab {

// mu(shadow(g)) e^{h|g|} for every nontrivial g with |g| <= R_max.
ExperimentReport shadow_lemma_report(const ConformalDensity& density, double sigma0, double R_max,
                                     std::size_t cap);

// mu(B_rho(xi)) / rho^D for sampled xi, with rho = exp(-eps * k * minweight)
// and k uniform in [0, k_max] (integers only when integer_k is set).
ExperimentReport ahlfors_report(const ConformalDensity& density, std::size_t samples, double k_max,
                                bool integer_k, std::uint64_t seed);

// mu{xi : (g, xi) > s} e^{hs} over g with |g| <= R_max and s on a grid of
// the given step. The summary carries the smallest margin C (on the same
// grid) for which all rows with s < |g| - C stay within spread_bound.
ExperimentReport generalized_shadow_report(const ConformalDensity& density, double R_max,
                                           double s_step, double spread_bound, std::size_t cap);

// #{g in A_R(alpha) : (g, xi) > s} / e^{h(R - s)} for sampled xi.
ExperimentReport cone_report(const ConformalDensity& density, double R, double alpha,
                             const std::vector<double>& s_grid, std::size_t samples,
                             std::uint64_t seed, std::size_t cap);

// #{g in A_R(alpha) : xi in shadow(g)} for sampled xi.
ExperimentReport cover_multiplicity_report(const ConformalDensity& density, double R, double alpha,
                                           double sigma0, std::size_t samples, std::uint64_t seed,
                                           std::size_t cap);

// |A_R(alpha)| over a grid of R with the fitted slope of log|A_R| against R.
ExperimentReport growth_report(const GroupModel& model, double h, double alpha,
                               const std::vector<double>& radii, std::size_t cap);

// Depth of prefix that a sampled point needs so that every quantity up to
// weighted length `reach` is exact.
std::size_t letters_for_reach(const GroupModel& model, double reach);

}  // namespace boundary_lab
