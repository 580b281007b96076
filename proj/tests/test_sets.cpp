#include <doctest.h>

#include "atomiso/compile.hpp"
#include "atomiso/errors.hpp"
#include "atomiso/sets.hpp"
#include "expr_oracle.hpp"

using namespace atomiso;

namespace {

const Backend& eqb() { return backend("equality"); }
const Backend& dlo() { return backend("dlo"); }

Expr P(std::string_view s, const Backend& b = backend("equality")) { return parse_expr(s, b); }

AtomSet ids(std::initializer_list<std::uint64_t> xs) {
  AtomSet out;
  for (auto x : xs) out.insert(Atom::id(x));
  return out;
}

const char* kKneserV = "{{a, b} | a, b in atoms, a != b}";

DefFunction smoothing_f() {
  auto A = P("{(a, b) | a, b in atoms} + atoms");
  auto G = P("{(a, (a, #1)) | a in atoms} + {((a, #1), a) | a in atoms} + {((a, b), (a, b)) | a, b in atoms, b != #1}");
  return make_function(A, A, G);
}

}  // namespace

TEST_CASE("orbit decomposition") {
  CHECK(orbit_decomposition(eqb(), P("{(a, b) | a, b in atoms}"), {}).size() == 2);
  CHECK(orbit_decomposition(eqb(), Expr::atoms(), ids({1})).size() == 2);
  CHECK(orbit_decomposition(eqb(), P(kKneserV), {}).size() == 1);
  CHECK(orbit_decomposition(dlo(), P("{(a, b) | a, b in atoms}", dlo()), {}).size() == 3);
  CHECK(orbit_decomposition(dlo(), Expr::atoms(), {Atom::rational(Rational(0))}).size() == 3);
  // the same orbit written twice
  CHECK(orbit_decomposition(eqb(), P("atoms + {a | a in atoms, a != #1}"), ids({1})).size() == 2);
  CHECK(orbit_decomposition(eqb(), P("{{a, b} | a, b in atoms, a != b} + {{b, a} | a, b in atoms, a != b}"), {}).size() == 1);
  CHECK(orbit_decomposition(eqb(), P("{#1, #2}"), ids({1, 2})).size() == 2);
  CHECK_THROWS_AS(orbit_decomposition(eqb(), P("{#1, #2}"), ids({1})), SupportError);
  CHECK(orbit_decomposition(eqb(), Expr::empty(), {}).empty());

  // the orbits partition the set
  for (const auto& [be, text] : std::vector<std::pair<std::string, std::string>>{
           {"equality", "{(a, {b | b in atoms, b != a}) | a in atoms} + {{a, #1} | a in atoms}"},
           {"dlo", "{(a, b) | a, b in atoms, a < 1 or b = 0}"},
           {"cyclic", "{(a, b, c) | a, b, c in atoms, R(a, b, c) or a = b}"}}) {
    const auto& b = backend(be);
    auto X = parse_expr(text, b);
    AtomSet S = X.params();
    auto orbits = orbit_decomposition(b, X, S);
    CHECK(set_equal(b, union_of(orbits, (std::uint64_t{1} << orbits.size()) - 1), X));
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      CHECK(is_member(b, orbits[i].element, X));
      CHECK(is_member(b, orbits[i].element, orbits[i].expr()));
      for (std::size_t j = i + 1; j < orbits.size(); ++j) CHECK_FALSE(is_member(b, orbits[i].element, orbits[j].expr()));
    }
  }
}

TEST_CASE("orbit expressions") {
  auto o = orbit_expression(eqb(), P("(#1, #2)"), ids({1}));
  CHECK(set_equal(eqb(), o, P("{(#1, a) | a in atoms, a != #1}")));
  CHECK(orbit_expression(eqb(), P("(#1, #2)"), ids({1, 2})) == P("{(#1, #2)}"));
  auto d = orbit_expression(dlo(), P("1/2", dlo()), {Atom::rational(Rational(0)), Atom::rational(Rational(1))});
  CHECK(set_equal(dlo(), d, P("{a | a in atoms, 0 < a and a < 1}", dlo())));
  auto s = orbit_expression(eqb(), P("{a | a in atoms, a != #3}"), {});
  CHECK(set_equal(eqb(), s, P("{{b | b in atoms, b != a} | a in atoms}")));
  CHECK(to_string(s).find('_') == std::string::npos);
  CHECK(set_equal(eqb(), orbit_expression(eqb(), P("{#1, #2}"), {}), P(kKneserV)));
  CHECK(orbit_expression(eqb(), P("#1"), ids({1})) == P("{#1}"));
  CHECK(set_equal(eqb(), orbit_expression(eqb(), P("(#1, #2)"), {}), P("{(a, b) | a, b in atoms, a != b}")));
}

TEST_CASE("least supports") {
  CHECK(least_support(eqb(), Expr::atoms()).atoms.empty());
  CHECK(least_support(eqb(), P("{a | a in atoms, a != #1 and a != #2}")).atoms == ids({1, 2}));
  CHECK(least_support(eqb(), P("{a | a in atoms, a = #1 or a != #1}")).atoms.empty());
  CHECK(least_support(eqb(), P("(#3, {#1, #2})")).atoms == ids({1, 2, 3}));
  CHECK(least_support(eqb(), P("{#2} + {a | a in atoms, a != #2}")).dimension() == 0);
  CHECK(least_support(dlo(), P("{a | a in atoms, a < 1 or a = 1}", dlo())).atoms == AtomSet{Atom::rational(Rational(1))});
  CHECK(supports(eqb(), P("{a | a in atoms, a != #1}"), ids({1, 5})));
  CHECK_FALSE(supports(eqb(), P("{a | a in atoms, a != #1}"), ids({5})));
}

TEST_CASE("definable subsets") {
  CHECK(definable_subsets(eqb(), Expr::atoms(), {}).size() == 2);
  CHECK(definable_subsets(eqb(), Expr::atoms(), ids({1})).size() == 4);
  CHECK(definable_subsets(eqb(), P("{(a, b) | a, b in atoms}"), {}).size() == 4);
  auto subs = definable_subsets(dlo(), Expr::atoms(), {Atom::rational(Rational(0))});
  CHECK(subs.size() == 8);
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = i + 1; j < subs.size(); ++j) CHECK_FALSE(set_equal(dlo(), subs[i], subs[j]));
  try {
    definable_subsets(eqb(), Expr::atoms(), ids({1, 2, 3}), 8);
    FAIL("expected the budget to be exceeded");
  } catch (const ResourceError& e) {
    CHECK(e.required() == 16);
  }
}

TEST_CASE("definable functions") {
  auto id = make_function(Expr::atoms(), Expr::atoms(), P("{(a, a) | a in atoms}"));
  CHECK(fn_check(eqb(), id).bijective());

  auto V = P(kKneserV);
  auto rel = make_function(V, Expr::atoms(), P("{({a, b}, a) | a, b in atoms, a != b}"));
  auto fl = fn_check(eqb(), rel);
  CHECK(fl.contained);
  CHECK(fl.total);
  CHECK(fl.surjective);
  CHECK_FALSE(fl.functional);

  auto pairs = make_function(Expr::atoms(), V, P("{(a, {a, b}) | a, b in atoms, a != b}"));
  auto pf = fn_check(eqb(), pairs);
  CHECK(pf.contained);
  CHECK(pf.total);
  CHECK_FALSE(pf.functional);

  auto f = smoothing_f();
  CHECK(fn_check(eqb(), f).bijective());
  CHECK(fn_apply(eqb(), f, P("#5")) == P("(#5, #1)"));
  CHECK(fn_apply(eqb(), f, P("(#5, #1)")) == P("#5"));
  CHECK(fn_apply(eqb(), f, P("(#5, #7)")) == P("(#5, #7)"));
  CHECK_THROWS_AS(fn_apply(eqb(), f, P("{#5}")), DomainError);
  CHECK(in_domain_of(eqb(), f, P("(#2, #2)")));
  CHECK_FALSE(in_domain_of(eqb(), f, P("(#2, #2, #2)")));

  auto g = inverse(checked(eqb(), f));
  REQUIRE(g.checked);
  CHECK(g.checked->bijective());
  CHECK(fn_apply(eqb(), g, P("(#5, #1)")) == P("#5"));

  auto shift = make_function(Expr::atoms(), Expr::atoms(), P("{(a, b) | a, b in atoms, a < b}", dlo()));
  auto sf = fn_check(dlo(), shift);
  CHECK(sf.total);
  CHECK(sf.surjective);
  CHECK_FALSE(sf.functional);
  CHECK_FALSE(sf.injective);

  CHECK_THROWS_AS(make_function(Expr::atoms(), Expr::atoms(), P("{a | a in atoms}")), ValidationError);
}

TEST_CASE("membership matches finite samples") {
  for (const auto& be : {"equality", "dlo", "cyclic"}) {
    const auto& b = backend(be);
    oracle::ExprGen gen(be, 23);
    int hits = 0, misses = 0;
    for (int i = 0; i < 80;) {
      auto X = gen.set({}, 2);
      auto x = gen.element({}, {}, 2);
      auto sx = Expr::enumerate({x});
      AtomSet params = X.params();
      params.insert(x.params().begin(), x.params().end());
      oracle::ExprEvaluator ev(be, params, std::max(oracle::max_binders(X), oracle::max_binders(sx)), 4);
      std::vector<std::size_t> sizes;
      for (std::size_t d = 0; d <= 4; ++d) sizes.push_back(ev.pool(d).size());
      if (oracle::eval_cost(X, sizes) + oracle::eval_cost(sx, sizes) > 4e4) continue;
      ++i;
      auto vx = ev.eval(sx).items.at(0);
      auto vX = ev.eval(X);
      bool truth = std::binary_search(vX.items.begin(), vX.items.end(), vx);
      (truth ? hits : misses)++;
      INFO(to_string(x) << " in " << to_string(X));
      CHECK(is_member(b, x, X) == truth);
    }
    CHECK(hits > 3);
    CHECK(misses > 3);
  }
}
