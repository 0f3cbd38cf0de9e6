#include <doctest.h>

#include <cmath>

#include "boundary_lab/flow.hpp"

using namespace boundary_lab;

namespace {
ConformalDensity unit_density() {
  return ConformalDensity::build(GroupModel::uniform(2), std::log(3.0) / 2.0);
}
}  // namespace

TEST_CASE("cocycle values") {
  GroupModel m = GroupModel::uniform(2);
  BoundaryPoint xi = BoundaryPoint::parse(m, "a", "b");
  CHECK(sigma(m, m.word("a"), xi) == doctest::Approx(-1.0));
  CHECK(sigma(m, m.word("A"), xi) == doctest::Approx(1.0));
  CHECK(tau(m, m.word("A"), BoundaryPoint::parse(m, "", "B"), BoundaryPoint::parse(m, "", "ab")) ==
        doctest::Approx(1.0));
  CHECK_THROWS(tau(m, m.word("a"), xi, xi));
  ConformalDensity d = unit_density();
  CHECK(rho(d, m.word("ab"), xi) == doctest::Approx(sigma(m, m.word("ab"), xi)));
}

TEST_CASE("BMS masses") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  CHECK(bms_mass(d, {Cylinder{m.word("a")}, Cylinder{m.word("b")}}) == doctest::Approx(1.0 / 16.0));
  CHECK(bms_mass(d, {Cylinder{m.word("ab")}, Cylinder{m.word("aB")}}) == doctest::Approx(1.0 / 16.0));
  CHECK(bms_image_mass(d, m.word("A"), {Cylinder{m.word("ab")}, Cylinder{m.word("aB")}}) ==
        doctest::Approx(bms_mass(d, {Cylinder{m.word("b")}, Cylinder{m.word("B")}})));
  CHECK_THROWS(bms_mass(d, {Cylinder{m.word("a")}, Cylinder{m.word("ab")}}));
}

TEST_CASE("tau minus sigma stays within 2M") {
  ConformalDensity d = unit_density();
  ExperimentReport r = tau_sigma_gap_report(d, 2.0, 2000, 9);
  CHECK(r.summary["max_gap"].get<double>() <= 4.0 + 1e-9);
  CHECK(r.summary["within_bound"].get<bool>());
}

TEST_CASE("properness") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  CHECK(properness_hit(d, m.identity(), 0.9, 0.5));
  CHECK(!properness_hit(d, m.word("aaaaaa"), 0.9, 0.5));
  ExperimentReport r = properness_report(d, 1.0, 0.5, 8, 10'000'000);
  CHECK(r.summary["hits_beyond_bound"].get<std::int64_t>() == 0);
  ExperimentReport empty = properness_report(d, 1.5, 0.5, 6, 10'000'000);
  CHECK(empty.summary["hit_count"].get<std::int64_t>() == 0);
}

TEST_CASE("tube enumeration") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "B");
  BoundaryPoint eta = BoundaryPoint::parse(m, "", "a");
  auto tube = tube_enumerate(d, xi, eta, 0.0, 2.0, 0.0);
  for (const auto& t : tube) {
    CHECK(t.sigma >= -1e-9);
    CHECK(t.sigma <= 2.0 + 1e-9);
    CHECK(t.offset <= 1e-9);
  }
  CHECK(!tube.empty());
  CHECK(tube_enumerate(d, xi, eta, 3.0, 1.0, 2.0).empty());
}

TEST_CASE("Hopf averages") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "B");
  BoundaryPoint eta = BoundaryPoint::parse(m, "", "a");
  CHECK(hopf_average(d, KernelStep::constant(m, 0.0), xi, eta, 0.0, 20.0) == 0.0);
  KernelStep rect = KernelStep::rectangle(m, Cylinder{m.word("a")}, Cylinder{m.word("b")});
  CHECK(bms_integral(d, rect) == doctest::Approx(1.0 / 16.0));
  CHECK(flow_normalization(d) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("BMS mass of distinct first letters") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  KernelStep f = KernelStep::build(m, [&](std::span<const Letter> w) -> std::optional<StepFunction> {
    if (w.empty()) return std::nullopt;
    return StepFunction::constant(m, 1.0) - StepFunction::indicator(m, Cylinder{m.from_letters(w)});
  });
  CHECK(bms_integral(d, f) == doctest::Approx(0.75));
}
