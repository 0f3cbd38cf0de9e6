#include <doctest.h>

#include <cmath>

#include "boundary_lab/words.hpp"

using namespace boundary_lab;

TEST_CASE("multiplication reduces and respects the identity") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(m.format(m.multiply(m.word("aB"), m.word("ba"))) == "aa");
  ReducedWord w = m.word("aBBa");
  CHECK(m.multiply(w, m.identity()) == w);
  CHECK(m.multiply(m.identity(), w) == w);
  CHECK(m.multiply(m.word("ab"), m.word("BA")).empty());
}

TEST_CASE("inversion") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(m.format(m.invert(m.word("ab"))) == "BA");
  CHECK(m.invert(m.identity()).empty());
  CHECK(m.invert(m.invert(m.word("aBa"))) == m.word("aBa"));
}

TEST_CASE("word parsing reduces its input and rejects unknown letters") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(m.word("aA").empty());
  CHECK(m.format(m.word("abBa")) == "aa");
  CHECK_THROWS(m.word("ac"));
}

TEST_CASE("distance and Gromov product") {
  GroupModel unit = GroupModel::uniform(2);
  GroupModel w(2, {1.0, 2.0});
  CHECK(unit.distance(unit.word("ab"), unit.word("aB")) == doctest::Approx(2.0));
  CHECK(unit.distance(unit.word("ab"), unit.word("ab")) == 0.0);
  CHECK(w.distance(w.identity(), w.word("b")) == doctest::Approx(2.0));
  CHECK(unit.gromov_product(unit.word("ab"), unit.word("aB"), unit.identity()) == doctest::Approx(1.0));
  ReducedWord x = unit.word("abA");
  CHECK(unit.gromov_product(x, x, unit.identity()) == doctest::Approx(3.0));
  CHECK(unit.gromov_product(unit.word("a"), unit.word("b"), unit.identity()) == 0.0);
}

TEST_CASE("annulus enumeration") {
  GroupModel m = GroupModel::uniform(2);
  CHECK(m.annulus(3.0, 1.5, 1000).size() == 156);
  CHECK(m.annulus(0.5, 0.4, 1000).empty());
  CHECK(m.annulus(1.0, 0.5, 1000).size() == 4);
  // Length-lex order on the output.
  auto words = m.annulus(3.0, 1.5, 1000);
  for (std::size_t i = 1; i < words.size(); ++i) CHECK(length_lex_less(words[i - 1], words[i]));
}

TEST_CASE("enumeration honours the cap") {
  GroupModel m = GroupModel::uniform(2);
  CHECK_THROWS(m.annulus(6.0, 1.5, 10));
}

TEST_CASE("free groups are 0-hyperbolic") {
  CHECK(estimate_delta(GroupModel::uniform(2), 10000, 7) == 0.0);
  CHECK(estimate_delta(GroupModel(2, {1.0, 2.0}), 2000, 3) == 0.0);
  CHECK_THROWS(estimate_delta(GroupModel::uniform(2), 0, 1));
}

TEST_CASE("scaling multiplies every length") {
  GroupModel m(2, {1.0, 2.0});
  GroupModel s = m.scaled(3.0);
  CHECK(s.word("aB").wlen() == doctest::Approx(9.0));
}
