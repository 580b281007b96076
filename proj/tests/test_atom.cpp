#include <doctest.h>

#include "atomiso/atom.hpp"
#include "atomiso/errors.hpp"

using namespace atomiso;

TEST_CASE("rationals are kept in lowest terms") {
  Rational q(6, -4);
  CHECK(q.num() == -3);
  CHECK(q.den() == 2);
  CHECK(q.str() == "-3/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(q.floor() == -2);
  CHECK(q.ceil() == -1);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
}

TEST_CASE("simplest rational strictly between bounds") {
  CHECK(simplest_between(Rational(0), Rational(1)) == Rational(1, 2));
  CHECK(simplest_between(Rational(0), Rational(1, 2)) == Rational(1, 3));
  CHECK(simplest_between(Rational(1, 2), Rational(1)) == Rational(2, 3));
  CHECK(simplest_between(Rational(-1), Rational(1)) == Rational(0));
  CHECK(simplest_between(Rational(3), std::nullopt) == Rational(4));
  CHECK(simplest_between(std::nullopt, Rational(-3)) == Rational(-4));
  CHECK(simplest_between(std::nullopt, Rational(1, 2)) == Rational(0));
  CHECK(simplest_between(Rational(-1, 2), Rational(0)) == Rational(-1, 3));
  CHECK(simplest_between(Rational(2, 7), Rational(3, 7)) == Rational(1, 3));
  CHECK_THROWS_AS(simplest_between(Rational(1), Rational(1)), DomainError);
}

TEST_CASE("simplest point has no simpler rival in the interval") {
  for (int a = -6; a <= 6; ++a)
    for (int b = 1; b <= 5; ++b)
      for (int c = a; c <= 7; ++c)
        for (int d = 1; d <= 5; ++d) {
          Rational lo(a, b), hi(c, d);
          if (!(lo < hi)) continue;
          auto s = simplest_between(lo, hi);
          REQUIRE(lo < s);
          REQUIRE(s < hi);
          for (std::int64_t den = 1; den < s.den(); ++den)
            for (std::int64_t num = -40; num <= 40; ++num) {
              Rational r(num, den);
              CHECK_FALSE((lo < r && r < hi));
            }
        }
}

TEST_CASE("atom literals parse and print") {
  CHECK(Atom::parse("#3")->str() == "#3");
  CHECK(Atom::parse("-2/4")->str() == "-1/2");
  CHECK(Atom::parse("7")->kind() == Atom::Kind::Rational);
  CHECK_FALSE(Atom::parse("#"));
  CHECK_FALSE(Atom::parse("1/0"));
  CHECK_FALSE(Atom::parse("x"));
  CHECK(Atom::id(1) < Atom::id(2));
  CHECK(to_string(parse_atom_list("#2, #1 #2")) == "#1 #2");
  CHECK(parse_atom_list("").empty());
  CHECK_THROWS_AS(parse_atom_list("#1,y"), SyntaxError);
}
