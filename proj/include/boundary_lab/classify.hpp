#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boundary_lab/density.hpp"
#include "boundary_lab/report.hpp"

namespace boundary_lab {

// Two metrics on the same free group: same rank, separate weights, each with
// its own density.
struct MetricPair {
  ConformalDensity first;
  ConformalDensity second;

  // Throws when the ranks differ.
  static MetricPair build(const GroupModel& m1, double eps1, const GroupModel& m2, double eps2);
  // Both densities at dimension D.
  static MetricPair at_dimension(const GroupModel& m1, const GroupModel& m2, double D);
};

enum class Verdict { Similar, NotSimilar, Inconclusive };
enum class MeasureVerdict { Equivalent, SingularTendency, Inconclusive };

std::string to_string(Verdict v);
std::string to_string(MeasureVerdict v);

// Abstention band on fitted slopes.
inline constexpr double kFlatSlope = 0.01;
inline constexpr double kGrowingSlope = 0.05;

// max over |g|_1 <= R of |h1 |g|_1 - h2 |g|_2| for R = 1..R_max, the fitted
// slope, and the verdict.
ExperimentReport similarity_deviation_report(const MetricPair& mp, int R_max, std::size_t cap);
// max/min over letter-depth n cylinders of mu1/mu2, for n = 1..depth.
ExperimentReport density_ratio_report(const MetricPair& mp, int depth, std::size_t cap);

// [x, y; z, w] = d(x, z) d(y, w) / (d(x, w) d(y, z)). Throws unless the four
// points are distinct.
double cross_ratio(const GroupModel& model, const VisualMetric& vm, const BoundaryPoint& x,
                   const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& w);

// Regression of ln d_2 on ln d_1 over sampled pairs, and of ln [.]_2 on
// ln [.]_1 over sampled quadruples.
ExperimentReport holder_fit_report(const MetricPair& mp, std::size_t samples, std::uint64_t seed);

struct ConstructedPair {
  std::string name;
  std::vector<double> weights1;
  std::vector<double> weights2;
  std::optional<Verdict> expected;  // unset when there is no ground truth
};

// Ground-truth library: exact rescalings (similar) and pairs whose normalised
// length spectra differ (not similar).
std::vector<ConstructedPair> constructed_pairs();

// Runs both verdicts and the Hölder fit on each pair at dimension D.
ExperimentReport classify_report(const std::vector<ConstructedPair>& pairs, double D, int R_max,
                                 int depth, std::size_t samples, std::uint64_t seed,
                                 std::size_t cap);

}  // namespace boundary_lab
