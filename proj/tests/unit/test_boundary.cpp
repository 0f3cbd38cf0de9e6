#include <doctest.h>

#include <cmath>
#include <limits>

#include "boundary_lab/boundary.hpp"

using namespace boundary_lab;

TEST_CASE("word-to-boundary Gromov product") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(gromov_wb(m, m.word("ab"), BoundaryPoint::parse(m, "a", "b")) == doctest::Approx(2.0));
  CHECK(gromov_wb(m, m.identity(), BoundaryPoint::parse(m, "a", "b")) == 0.0);
  CHECK(gromov_wb(m, m.word("B"), BoundaryPoint::parse(m, "", "ab")) == 0.0);
}

TEST_CASE("boundary-to-boundary Gromov product") {
  GroupModel m = GroupModel::uniform(2);
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "ab");
  CHECK(gromov_bb(m, xi, BoundaryPoint::parse(m, "", "aB")) == doctest::Approx(1.0));
  CHECK(std::isinf(gromov_bb(m, xi, xi)));
  CHECK(gromov_bb(m, BoundaryPoint::parse(m, "", "a"), BoundaryPoint::parse(m, "", "b")) == 0.0);
}

TEST_CASE("equal points have a canonical form") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(BoundaryPoint::parse(m, "ab", "ab") == BoundaryPoint::parse(m, "", "ab"));
  CHECK(BoundaryPoint::parse(m, "a", "ba") == BoundaryPoint::parse(m, "", "ab"));
}

TEST_CASE("visual distance") {
  GroupModel m = GroupModel::uniform(2);
  VisualMetric vm(std::log(3.0) / 2.0, std::log(3.0));
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "ab");
  CHECK(visual_distance(m, vm, xi, BoundaryPoint::parse(m, "", "aB")) ==
        doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(visual_distance(m, vm, xi, xi) == 0.0);
  CHECK(visual_distance(m, vm, BoundaryPoint::parse(m, "", "a"), BoundaryPoint::parse(m, "", "b")) == 1.0);
}

TEST_CASE("shadows") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(shadow(m, m.word("ab"), 1.5).prefix == m.word("a"));
  CHECK(shadow(m, m.word("ab"), 0.5).prefix == m.word("ab"));
  CHECK(shadow(m, m.word("b"), 1.5).prefix == m.word("b"));
}

TEST_CASE("balls") {
  GroupModel m = GroupModel::uniform(2);
  VisualMetric vm(std::log(3.0) / 2.0, std::log(3.0));
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "ab");
  CHECK(ball(m, vm, xi, 0.6).prefix == m.word("a"));
  CHECK(ball(m, vm, xi, 2.0).whole());
  CHECK(ball(m, vm, xi, 1.0 / std::sqrt(3.0)).prefix == m.word("ab"));
}

TEST_CASE("action on boundary points") {
  GroupModel m = GroupModel::uniform(2);
  BoundaryPoint xi = BoundaryPoint::parse(m, "", "ab");
  CHECK(act(m, m.word("A"), xi) == BoundaryPoint::parse(m, "", "ba"));
  CHECK(act(m, m.identity(), xi) == xi);
  CHECK(act(m, m.word("a"), BoundaryPoint::parse(m, "", "b")) == BoundaryPoint::parse(m, "a", "b"));
  ReducedWord g = m.word("abA");
  CHECK(act(m, m.invert(g), act(m, g, xi)) == xi);
}

TEST_CASE("cylinders") {
  GroupModel m = GroupModel::uniform(2);
  Cylinder a{m.word("a")};
  Cylinder ab{m.word("ab")};
  CHECK(a.contains(ab));
  CHECK(!ab.contains(a));
  CHECK(ab.disjoint_from(Cylinder{m.word("aB")}));
  CHECK(a.contains(BoundaryPoint::parse(m, "", "ab")));
}
