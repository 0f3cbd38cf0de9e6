#pragma once

#include <cstdint>
#include <vector>

#include "boundary_lab/density.hpp"
#include "boundary_lab/report.hpp"
#include "boundary_lab/step_function.hpp"

namespace boundary_lab {

// P_g = sqrt(d g_* mu / d mu), breaking only along the prefixes of g.
StepFunction p_weight(const ConformalDensity& density, const ReducedWord& g);
// ||P_g||_1, exact from the level sets of (g, .).
double p1_norm(const ConformalDensity& density, const ReducedWord& g);
// P_g(xi) / ||P_g||_1.
double p_tilde(const ConformalDensity& density, const ReducedWord& g, const BoundaryPoint& xi);

// (pi(g) f)(xi) = P_g(xi) f(g^-1 xi).
StepFunction koopman_apply(const ConformalDensity& density, const ReducedWord& g,
                           const StepFunction& f);

// <pi(g) phi, psi> without materialising pi(g) phi.
double koopman_pairing(const ConformalDensity& density, const ReducedWord& g,
                       const StepFunction& phi, const StepFunction& psi);
// <pi~(g) phi, psi> = <pi(g) phi, psi> / ||P_g||_1.
double matrix_coefficient(const ConformalDensity& density, const ReducedWord& g,
                          const StepFunction& phi, const StepFunction& psi);

// xi -> exp(-eps (xi, target)), exact off the first `depth` letters of target
// and frozen at depth beyond.
StepFunction distance_profile(const ConformalDensity& density, const BoundaryPoint& target,
                              std::size_t depth);

// max over g in the annulus (n - 1/2, n + 1/2) of
// |<pi~(g) phi, psi> - phi(check g) psi(hat g)|, for n = n_min..n_max.
ExperimentReport matrix_coefficient_decay_report(const ConformalDensity& density,
                                                 const StepFunction& phi, const StepFunction& psi,
                                                 int n_min, int n_max, std::size_t cap);

// ||P_g||_1 e^{h|g|/2} / (1 + |g|) over |g| <= R_max, grouped by length.
ExperimentReport p1_norm_report(const ConformalDensity& density, double R_max, std::size_t cap);

// sum over g in A_R(alpha) of P~_g(xi), divided by e^{hR}.
double annulus_weight(const ConformalDensity& density, double R, double alpha,
                      const BoundaryPoint& xi, std::size_t cap);
ExperimentReport annulus_weight_report(const ConformalDensity& density,
                                       const std::vector<double>& radii, double alpha,
                                       const BoundaryPoint& xi, std::size_t cap);

}  // namespace boundary_lab
