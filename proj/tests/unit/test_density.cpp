#include <doctest.h>

#include <cmath>

#include "boundary_lab/density.hpp"
#include "boundary_lab/lemmas.hpp"

using namespace boundary_lab;

namespace {
ConformalDensity unit_density() {
  GroupModel m = GroupModel::uniform(2);
  return ConformalDensity::build(m, std::log(3.0) / 2.0);
}
}  // namespace

TEST_CASE("critical exponents") {
  CHECK(critical_exponent(GroupModel::uniform(2)) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(critical_exponent(GroupModel(2, {1.0, 2.0})) == doctest::Approx(0.7563).epsilon(1e-4));
  GroupModel m(2, {1.0, 2.0});
  CHECK(critical_exponent(m.scaled(2.0)) == doctest::Approx(critical_exponent(m) / 2.0));
}

TEST_CASE("cylinder masses") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  CHECK(d.mu(Cylinder{m.word("a")}) == doctest::Approx(0.25));
  CHECK(d.mu(Cylinder{m.word("ab")}) == doctest::Approx(1.0 / 12.0));
  CHECK(d.mu(Cylinder{}) == doctest::Approx(1.0));
  GroupModel w(2, {1.0, 2.0});
  ConformalDensity dw = ConformalDensity::build(w, critical_exponent(w) / 2.0);
  double total = 0.0;
  for (const char* s : {"a", "b", "A", "B"}) total += dw.mu(Cylinder{w.word(s)});
  CHECK(total == doctest::Approx(1.0));
  double expected = std::exp(-2.0 * dw.h()) * dw.perron()[1] / dw.normalizer();
  CHECK(dw.mu(Cylinder{w.word("b")}) == doctest::Approx(expected));
}

TEST_CASE("epsilon must be below the exponent") {
  CHECK_THROWS(ConformalDensity::build(GroupModel::uniform(2), 2.0));
}

TEST_CASE("truncated Poincare series") {
  GroupModel m = GroupModel::uniform(2);
  double s = std::log(3.0) + 0.5;
  double a = poincare_truncated(m, s, 8, Cylinder{m.word("a")});
  CHECK(a == doctest::Approx(poincare_truncated(m, s, 8, Cylinder{m.word("B")})));
  CHECK(poincare_truncated(m, s, 8, Cylinder{}) == doctest::Approx(1.0));
  GroupModel w(2, {1.0, 2.0});
  double h = critical_exponent(w);
  ConformalDensity dw = ConformalDensity::build(w, h / 2.0);
  CHECK(std::abs(poincare_truncated(w, h + 0.01, 12, Cylinder{w.word("a")}) -
                 dw.mu(Cylinder{w.word("a")})) < 0.02);
}

TEST_CASE("Radon-Nikodym derivative") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  BoundaryPoint abbb = BoundaryPoint::parse(m, "a", "b");
  CHECK(d.rn_derivative(m.word("a"), abbb) == doctest::Approx(3.0));
  CHECK(d.rn_derivative(m.identity(), abbb) == doctest::Approx(1.0));
  CHECK(d.rn_derivative(m.word("a"), BoundaryPoint::parse(m, "", "B")) == doctest::Approx(1.0 / 3.0));
  CHECK(d.rn_derivative_by_cylinders(m.word("a"), abbb) == doctest::Approx(3.0));
}

TEST_CASE("Markov transitions") {
  ConformalDensity d = unit_density();
  CHECK(d.transition(0, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(d.transition(0, 2) == 0.0);
  for (Letter a = 0; a < 4; ++a) {
    double row = 0.0;
    for (Letter b = 0; b < 4; ++b) row += d.transition(a, b);
    CHECK(row == doctest::Approx(1.0));
  }
}

TEST_CASE("sampled cylinder frequencies sit within three standard errors") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  Rng rng(11);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    ReducedWord w = d.sample_prefix(2, rng);
    if (w == m.word("ab")) ++hits;
  }
  double p = 1.0 / 12.0;
  CHECK(std::abs(hits / double(n) - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("shadow lemma ratios") {
  ConformalDensity d = unit_density();
  ExperimentReport r = shadow_lemma_report(d, 1.5, 8.0, 1'000'000);
  CHECK(r.summary["min_ratio"].get<double>() == doctest::Approx(0.75));
  CHECK(r.summary["max_ratio"].get<double>() == doctest::Approx(2.25));
}

TEST_CASE("Ahlfors ratios on dyadic radii") {
  ConformalDensity d = unit_density();
  ExperimentReport r = ahlfors_report(d, 100, 6.0, true, 5);
  CHECK(r.summary["min_ratio"].get<double>() == doctest::Approx(0.25));
  CHECK(r.summary["max_ratio"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("cover multiplicity is exactly nine") {
  ConformalDensity d = unit_density();
  ExperimentReport r = cover_multiplicity_report(d, 5.0, 1.5, 1.5, 200, 3, 1'000'000);
  CHECK(r.summary["min_multiplicity"].get<std::int64_t>() == 9);
  CHECK(r.summary["max_multiplicity"].get<std::int64_t>() == 9);
}
