#include <doctest.h>

#include <cmath>

#include "boundary_lab/errors.hpp"
#include "boundary_lab/kernels.hpp"
#include "boundary_lab/koopman.hpp"

using namespace boundary_lab;

namespace {
ConformalDensity unit_density() {
  return ConformalDensity::build(GroupModel::uniform(2), std::log(3.0) / 2.0);
}
}  // namespace

TEST_CASE("square-root weights") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction p = p_weight(d, m.word("a"));
  CHECK(p.at(BoundaryPoint::parse(m, "a", "b")) == doctest::Approx(std::sqrt(3.0)));
  CHECK(p.at(BoundaryPoint::parse(m, "", "b")) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(p_weight(d, m.identity()) == StepFunction::constant(m, 1.0));
  CHECK(p1_norm(d, m.word("a")) == doctest::Approx(std::sqrt(3.0) / 2.0));
  CHECK(p1_norm(d, m.identity()) == doctest::Approx(1.0));
}

TEST_CASE("Koopman operators") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction b = StepFunction::indicator(m, Cylinder{m.word("b")});
  StepFunction image = koopman_apply(d, m.word("a"), b).canonical();
  StepFunction expected = StepFunction::indicator(m, Cylinder{m.word("ab")}, std::sqrt(3.0)).canonical();
  CHECK(l2_norm(d, image - expected) < 1e-12);
  CHECK(koopman_apply(d, m.identity(), b) == b);
  CHECK(koopman_pairing(d, m.word("a"), b, StepFunction::indicator(m, Cylinder{m.word("ab")})) ==
        doctest::Approx(std::sqrt(3.0) / 12.0));
}

TEST_CASE("Koopman operators are a unitary representation") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction f = StepFunction::indicator(m, Cylinder{m.word("aB")}, 2.0) +
                   StepFunction::indicator(m, Cylinder{m.word("b")}, -1.0);
  ReducedWord g = m.word("ab");
  ReducedWord h = m.word("Ba");
  CHECK(l2_norm(d, koopman_apply(d, g, f)) == doctest::Approx(l2_norm(d, f)));
  StepFunction lhs = koopman_apply(d, m.multiply(g, h), f);
  StepFunction rhs = koopman_apply(d, g, koopman_apply(d, h, f));
  CHECK(l2_norm(d, lhs - rhs) < 1e-12);
}

TEST_CASE("normalised matrix coefficients") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction one = StepFunction::constant(m, 1.0);
  for (const char* g : {"", "a", "abA", "BBa"}) {
    CHECK(matrix_coefficient(d, m.word(g), one, one) == doctest::Approx(1.0));
  }
  StepFunction a = StepFunction::indicator(m, Cylinder{m.word("a")});
  CHECK(matrix_coefficient(d, m.identity(), a, one) == doctest::Approx(0.25));
}

TEST_CASE("Harish-Chandra values") {
  ConformalDensity d = unit_density();
  ExperimentReport r = p1_norm_report(d, 10.0, 10'000'000);
  CHECK(r.summary["max_value"].get<double>() == doctest::Approx(1.0));
  CHECK(r.summary["spread"].get<double>() <= 4.0);
  // <pi(a) 1, 1> / ||P_a||_1 ... the raw value is ||P_a||_1 itself.
  const GroupModel& m = d.model();
  StepFunction one = StepFunction::constant(m, 1.0);
  CHECK(koopman_pairing(d, m.word("a"), one, one) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("integral operators") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction a = StepFunction::indicator(m, Cylinder{m.word("a")});
  StepFunction b = StepFunction::indicator(m, Cylinder{m.word("b")});
  StepFunction t = kernel_apply(d, KernelStep::constant(m, 1.0), a);
  CHECK(l2_norm(d, t - StepFunction::constant(m, 0.25)) < 1e-12);
  StepFunction phi = StepFunction::indicator(m, Cylinder{m.word("aB")}, 3.0);
  t = kernel_apply(d, KernelStep::from_left(m, phi), StepFunction::constant(m, 1.0));
  CHECK(l2_norm(d, t - phi) < 1e-12);
  KernelStep rect = KernelStep::rectangle(m, Cylinder{m.word("a")}, Cylinder{m.word("b")});
  t = kernel_apply(d, rect, b);
  CHECK(l2_norm(d, t - 0.25 * a) < 1e-12);
}

TEST_CASE("maximal separated nets") {
  GroupModel m = GroupModel::uniform(2);
  NetFamily net = build_net(m, 4.0, 1.5, 1.5, 1.5, 1'000'000);
  CHECK(net.members.size() == 108);
  CHECK(shadows_cover(m, net.shadows));
  // Distinct words are at distance >= 1, so C = 0.5 admits the whole annulus
  // (lengths 3, 4 and 5).
  CHECK(build_net(m, 4.0, 1.5, 0.5, 1.5, 1'000'000).members.size() == 36 + 108 + 324);
  CHECK(build_net(m, 4.0, 0.2, 1.5, 1.5, 1'000'000).members.size() == 108);
  CHECK_THROWS(build_net(m, 4.5, 0.2, 1.5, 1.5, 1'000'000));
}

TEST_CASE("S_R construction at R = 4") {
  ConformalDensity d = unit_density();
  SrParameters p;
  p.R = 4.0;
  SrOperator op = SrOperator::build(d, KernelStep::constant(d.model(), 1.0), p);
  CHECK(op.empty_u_count() == 0);
  CHECK(op.pairing_one() == doctest::Approx(1.0));
  CHECK(op.pairing_one() >= 0.0);
  CHECK(op.sup_s1() < 10.0);
  // Siblings of the net share elements; the witness names one.
  CHECK(!op.u_sets_disjoint());
  CHECK(!op.overlap_witness().empty());
}

TEST_CASE("projection kernels") {
  ConformalDensity d = unit_density();
  const GroupModel& m = d.model();
  StepFunction one = StepFunction::constant(m, 1.0);
  for (double rho : {0.9, 0.3, 0.05}) {
    CHECK(l2_norm(d, kernel_apply(d, projection_kernel(d, one, rho), one) - one) < 1e-12);
  }
  StepFunction E = StepFunction::indicator(m, Cylinder{m.word("a")});
  StepFunction phi = StepFunction::indicator(m, Cylinder{m.word("ab")});
  KernelStep fine = projection_kernel(d, E, std::pow(3.0, -3.0));
  CHECK(l2_norm(d, kernel_apply(d, fine, phi) - E * phi) < 1e-12);
}
