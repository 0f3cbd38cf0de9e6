#include <doctest.h>

#include <cmath>

#include "boundary_lab/classify.hpp"

using namespace boundary_lab;

TEST_CASE("exact rescalings are similar") {
  GroupModel m(2, {1.0, 2.0});
  MetricPair mp = MetricPair::at_dimension(m, m.scaled(2.0), 2.0);
  ExperimentReport r = similarity_deviation_report(mp, 8, 10'000'000);
  CHECK(r.summary["max_deviation"].get<double>() < 1e-9);
  CHECK(r.summary["verdict"] == "SIMILAR");
  MetricPair same = MetricPair::at_dimension(m, m, 2.0);
  CHECK(similarity_deviation_report(same, 6, 10'000'000).summary["verdict"] == "SIMILAR");
}

TEST_CASE("different length spectra are not similar") {
  GroupModel unit = GroupModel::uniform(2);
  GroupModel w(2, {1.0, 2.0});
  MetricPair mp = MetricPair::at_dimension(unit, w, 2.0);
  ExperimentReport r = similarity_deviation_report(mp, 8, 10'000'000);
  CHECK(r.summary["verdict"] == "NOT_SIMILAR");
  double expected = std::abs(std::log(3.0) - 2.0 * critical_exponent(w));
  CHECK(r.summary["slope"].get<double>() == doctest::Approx(expected).epsilon(0.1));
  CHECK_THROWS(MetricPair::at_dimension(unit, GroupModel::uniform(3), 2.0));
}

TEST_CASE("density ratios") {
  GroupModel unit = GroupModel::uniform(2);
  MetricPair scaled = MetricPair::build(unit, std::log(3.0) / 2.0, unit.scaled(2.0), std::log(3.0) / 4.0);
  ExperimentReport r = density_ratio_report(scaled, 6, 10'000'000);
  for (const auto& row : r.rows) CHECK(std::get<double>(row[3]) == doctest::Approx(1.0));
  CHECK(r.summary["verdict"] == "EQUIVALENT");
  GroupModel w(2, {1.0, 2.0});
  ExperimentReport d = density_ratio_report(MetricPair::at_dimension(unit, w, 2.0), 6, 10'000'000);
  CHECK(d.summary["verdict"] == "SINGULAR_TENDENCY");
  CHECK(std::get<double>(d.rows.back()[3]) > std::get<double>(d.rows.front()[3]));
}

TEST_CASE("cross ratios") {
  GroupModel m = GroupModel::uniform(2);
  VisualMetric vm(std::log(3.0) / 2.0, std::log(3.0));
  auto p = [&](const char* s) { return BoundaryPoint::parse(m, "", s); };
  CHECK(cross_ratio(m, vm, p("a"), p("b"), p("A"), p("B")) == doctest::Approx(1.0));
  double r = cross_ratio(m, vm, p("ab"), p("b"), p("aB"), p("B"));
  double swapped = cross_ratio(m, vm, p("ab"), p("b"), p("B"), p("aB"));
  CHECK(r * swapped == doctest::Approx(1.0));
  CHECK_THROWS(cross_ratio(m, vm, p("a"), p("a"), p("A"), p("B")));
}

TEST_CASE("Hölder exponent of a rescaled metric") {
  GroupModel unit = GroupModel::uniform(2);
  MetricPair half = MetricPair::build(unit, std::log(3.0) / 2.0, unit, std::log(3.0) / 4.0);
  ExperimentReport r = holder_fit_report(half, 300, 4);
  CHECK(r.summary["slope"].get<double>() == doctest::Approx(0.5));
  CHECK(r.summary["expected_slope"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("the constructed library classifies correctly") {
  std::vector<ConstructedPair> pairs;
  for (const auto& p : constructed_pairs()) {
    if (p.weights1.size() == 2) pairs.push_back(p);
  }
  ExperimentReport r = classify_report(pairs, 2.0, 8, 6, 200, 1, 10'000'000);
  CHECK(r.summary["all_verdicts_match_ground_truth"].get<bool>());
  CHECK(r.summary["all_verdicts_agree"].get<bool>());
}
