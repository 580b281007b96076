#include <doctest.h>

#include <cstdlib>

#include "atomiso/compile.hpp"
#include "atomiso/errors.hpp"
#include "atomiso/sets.hpp"
#include "suites.hpp"

using namespace atomiso;

namespace {

const Backend& eqb() { return backend("equality"); }
const Backend& dlo() { return backend("dlo"); }

Expr P(std::string_view s, const Backend& b = backend("equality")) { return parse_expr(s, b); }

}  // namespace

TEST_CASE("parse and print") {
  auto V = P("{{a, b} | a, b in atoms, a != b}");
  CHECK(V.kind() == Expr::Kind::Union);
  REQUIRE(V.comps().size() == 1);
  CHECK(V.comps()[0].binders == std::vector<std::string>{"a", "b"});
  CHECK(V.params().empty());
  CHECK(to_string(P("empty")) == "empty");
  CHECK(to_string(P("{#2, #1}")) == "{#1, #2}");

  for (const char* text : {"{{a, b} | a, b in atoms, a != b}", "atoms", "{#1, (#2, atoms)}",
                           "{(a, {c | c in atoms, c != a}) | a in atoms, a = #3 or not a = #4} + {#1}",
                           "{x | x in atoms, exists y. x != y and y != #1}", "(#1, #2, empty)"}) {
    auto e = P(text);
    CHECK(P(to_string(e)) == e);
  }
  auto d = P("{a | a in atoms, a < 1/2 and a >= -3}", dlo());
  CHECK(P(to_string(d), dlo()) == d);
  auto c = P("{(a, b, c) | a, b, c in atoms, R(a, b, c)}", backend("cyclic"));
  CHECK(P(to_string(c), backend("cyclic")) == c);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(P("{a | a, a in atoms}"), SyntaxError);
  CHECK_THROWS_AS(P("{a | b in atoms}"), SyntaxError);
  CHECK_THROWS_AS(P("{_x | _x in atoms}"), SyntaxError);
  CHECK_THROWS_AS(P("#1 + atoms"), SyntaxError);
  CHECK_THROWS_AS(P("{1/2}"), SyntaxError);
  CHECK_THROWS_AS(P("{a | a in atoms, a < #1}"), VocabularyError);
  CHECK_THROWS_AS(P("{#1"), SyntaxError);
  CHECK_THROWS_AS(Expr::set({Comp{Expr::var("a"), {"a", "a"}, truth()}}), ValidationError);
  try {
    P("{a | a in atoms,\n  a = b}");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("comments and unions") {
  auto e = P("atoms + atoms  # both halves\n");
  CHECK(set_equal(eqb(), e, Expr::atoms()));
  CHECK(set_equal(eqb(), P("{a | a in atoms, a = #1} + {a | a in atoms, a != #1}"), Expr::atoms()));
}

TEST_CASE("action of a permutation") {
  AtomMap pi{{Atom::id(0), Atom::id(1)}, {Atom::id(1), Atom::id(0)}, {Atom::id(3), Atom::id(4)}, {Atom::id(4), Atom::id(3)}};
  pi.emplace(Atom::id(2), Atom::id(2));
  CHECK(act(pi, P("{a | a in atoms, a != #1 and a != #2}")) == P("{a | a in atoms, a != #0 and a != #2}"));
  auto lit = P("{#0, #1, #2}");
  CHECK(set_equal(eqb(), act(pi, lit), lit));
  CHECK(act(pi, P("(#0, #3, #2)")) == P("(#1, #4, #2)"));
  CHECK(act({}, Expr::atoms()) == Expr::atoms());
  CHECK_THROWS_AS(act({{Atom::id(1), Atom::id(2)}}, P("(#1, #5)")), DomainError);
}

TEST_CASE("equality formulas") {
  auto X = Expr::comp(Expr::var("a"), {"a"}, neq(Term::var("a"), Term::var("p")));
  auto Y = Expr::comp(Expr::var("a"), {"a"}, neq(Term::var("a"), Term::var("q")));
  auto f = equality_formula(X, Y);
  for (const auto& be : {"equality", "dlo"}) {
    const auto& b = backend(be);
    CHECK(sat(b, forall("p", forall("q", iff(f, eq(Term::var("p"), Term::var("q")))))));
  }
  CHECK(sat(eqb(), equality_formula(Expr::atoms(), P("{a | a in atoms}"))));
  CHECK(equality_formula(Expr::atoms(), Expr::atoms()).is_true());
  auto pq = equality_formula(Expr::tuple({Expr::var("p"), Expr::var("q")}), Expr::tuple({Expr::var("q"), Expr::var("p")}));
  CHECK(sat(eqb(), forall("p", forall("q", iff(pq, eq(Term::var("p"), Term::var("q")))))));
  CHECK(equality_formula(Expr::atom(Atom::id(1)), Expr::atoms()).is_false());
  CHECK(equality_formula(Expr::tuple({Expr::atoms()}), Expr::tuple({Expr::atoms(), Expr::atoms()})).is_false());
}

TEST_CASE("membership and equality") {
  CHECK_FALSE(set_equal(eqb(), P("{a | a in atoms, a != #1}"), P("{a | a in atoms, a != #2}")));
  CHECK(is_member(eqb(), P("{#1, #2}"), P("{{a, b} | a, b in atoms, a != b}")));
  CHECK_FALSE(is_member(eqb(), P("{#1}"), P("{{a, b} | a, b in atoms, a != b}")));
  CHECK(is_member(eqb(), P("{#1}"), P("{{a, b} | a, b in atoms}")));
  CHECK(is_subset(dlo(), P("{a | a in atoms, a < 0}", dlo()), P("{a | a in atoms, a <= 1}", dlo())));
  CHECK_FALSE(is_subset(dlo(), P("{a | a in atoms, a <= 1}", dlo()), P("{a | a in atoms, a < 1}", dlo())));
  CHECK(set_equal(dlo(), P("{a | a in atoms, a < 0 or a >= 0}", dlo()), Expr::atoms()));
  // sets of sets that only differ on the empty set
  auto nested = P("{{b | b in atoms, a < b} | a in atoms}", dlo());
  auto plus = P("{{b | b in atoms, a < b} | a in atoms} + {empty}", dlo());
  CHECK_FALSE(set_equal(dlo(), nested, plus));
  CHECK_FALSE(oracle::brute_equal("dlo", nested, plus));
}

TEST_CASE("extensionality against finite samples") {
  const char* seed = std::getenv("SWEEP_SEED");
  const char* pairs = std::getenv("SWEEP_PAIRS");
  for (const auto& be : {"equality", "dlo", "cyclic"}) {
    auto t = suites::extensionality(be, seed ? std::strtoull(seed, nullptr, 10) : 11, pairs ? std::strtoul(pairs, nullptr, 10) : 150);
    INFO(t.example);
    CHECK(t.violations == 0);
    CHECK(t.positives > 20);
    CHECK(t.instances - t.positives > 20);
  }
}

TEST_CASE("printing round trips on generated expressions") {
  for (const auto& be : {"equality", "dlo", "cyclic"}) {
    oracle::ExprGen gen(be, 5);
    for (int i = 0; i < 200; ++i) {
      auto e = gen.set({}, gen.uniform(1, 3));
      INFO(to_string(e));
      auto once = parse_expr(to_string(e), backend(be));
      CHECK(to_string(once) == to_string(e));
      CHECK(parse_expr(to_string(once), backend(be)) == once);
    }
  }
}
