#include "atomiso/sets.hpp"

#include <algorithm>
#include <limits>

#include "atomiso/compile.hpp"
#include "atomiso/errors.hpp"

namespace atomiso {

bool set_equal(const Backend& b, const Expr& x, const Expr& y) { return sat(b, equality_formula(x, y)); }

bool is_member(const Backend& b, const Expr& x, const Expr& Y) { return sat(b, member_formula(x, Y)); }

bool is_subset(const Backend& b, const Expr& X, const Expr& Y) { return sat(b, subset_formula(X, Y)); }

Expr OrbitDescriptor::expr() const { return Expr::comp(clause.element, clause.binders, type); }

namespace {

std::string shape(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Atom:
    case Expr::Kind::Var:
      return "a";
    case Expr::Kind::Tuple: {
      std::string s = "(";
      for (const auto& i : e.items()) s += shape(i) + ",";
      return s + ")";
    }
    default:
      return "s";
  }
}

std::vector<Atom> leaf_atoms(const std::vector<Expr>& leaves) {
  std::vector<Atom> out;
  for (const auto& l : leaves) out.push_back(l.atom_value());
  return out;
}

}  // namespace

std::vector<OrbitDescriptor> orbit_decomposition(const Backend& b, const Expr& X, const AtomSet& S) {
  if (!X.is_set()) throw DomainError("orbit decomposition of a non-set " + to_string(X));
  for (const auto& p : X.params())
    if (!S.count(p)) throw SupportError("parameter " + p.str() + " of the set is not in S");
  std::vector<OrbitDescriptor> out;
  std::map<std::pair<std::string, std::vector<int>>, std::size_t> by_key;
  std::map<std::string, std::vector<std::size_t>> by_shape;
  const auto cs = clauses(X);
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& c = cs[ci];
    std::vector<Term> terms;
    for (const auto& v : c.binders) terms.push_back(Term::var(v));
    enumerate_orbits(b, c.binders, S, conjuncts(c.guard), [&](const std::vector<Atom>& rep) {
      Valuation val;
      for (std::size_t i = 0; i < rep.size(); ++i) val.emplace(c.binders[i], rep[i]);
      auto element = substitute(c.element, val);
      auto sh = shape(element);
      if (auto leaves = atomic_leaves(element)) {
        auto key = std::make_pair(sh, b.type_key(leaf_atoms(*leaves), S));
        if (by_key.count(key)) return true;
        by_key.emplace(std::move(key), out.size());
      } else {
        for (auto idx : by_shape[sh]) {
          if (out[idx].element == element || is_member(b, element, out[idx].expr())) return true;
        }
        by_shape[sh].push_back(out.size());
      }
      out.push_back(OrbitDescriptor{ci, c, b.diagram(terms, rep, S), S, std::move(val), std::move(element)});
      return true;
    });
  }
  return out;
}

Expr union_of(const std::vector<OrbitDescriptor>& orbits, std::uint64_t mask) {
  std::vector<Comp> comps;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (!(mask >> i & 1)) continue;
    auto e = orbits[i].expr();
    for (const auto& c : e.comps()) comps.push_back(c);
  }
  return Expr::set(std::move(comps));
}

std::vector<std::string> clean_names(std::size_t n, const std::set<std::string>& avoid) {
  std::vector<std::string> out;
  for (int round = 0; out.size() < n; ++round) {
    for (char ch = 'a'; ch <= 'z' && out.size() < n; ++ch) {
      std::string s(1, ch);
      if (round > 0) s += std::to_string(round);
      if (!avoid.count(s)) out.push_back(s);
    }
  }
  return out;
}

Expr orbit_expression(const Backend& b, const Expr& x, const AtomSet& S) {
  std::vector<Atom> moved;
  for (const auto& p : x.params())
    if (!S.count(p)) moved.push_back(p);
  if (moved.empty()) return Expr::enumerate({x});
  auto names = clean_names(moved.size(), names_in(x));
  std::map<Atom, std::string> abstraction;
  std::vector<Term> terms;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    abstraction.emplace(moved[i], names[i]);
    terms.push_back(Term::var(names[i]));
  }
  return Expr::comp(abstract_params(x, abstraction), names, b.diagram(terms, moved, S));
}

bool supports(const Backend& b, const Expr& x, const AtomSet& S) {
  switch (x.kind()) {
    case Expr::Kind::Atom:
      return S.count(x.atom_value()) != 0;
    case Expr::Kind::Tuple:
      return std::all_of(x.items().begin(), x.items().end(), [&](const Expr& i) { return supports(b, i, S); });
    default:
      break;
  }
  std::vector<Atom> moved;
  for (const auto& p : x.params())
    if (!S.count(p)) moved.push_back(p);
  if (moved.empty()) return true;
  std::map<Atom, std::string> abstraction;
  std::vector<std::string> vars;
  std::vector<Term> terms;
  for (const auto& p : moved) {
    vars.push_back(fresh_var("p"));
    abstraction.emplace(p, vars.back());
    terms.push_back(Term::var(vars.back()));
  }
  auto moved_x = abstract_params(x, abstraction);
  auto f = forall_block(vars, conjuncts(b.diagram(terms, moved, S)), equality_formula(moved_x, x));
  return sat(b, f);
}

Support least_support(const Backend& b, const Expr& x) {
  switch (x.kind()) {
    case Expr::Kind::Atom:
      return Support{{x.atom_value()}};
    case Expr::Kind::Tuple: {
      Support out;
      for (const auto& i : x.items()) {
        auto s = least_support(b, i);
        out.atoms.insert(s.atoms.begin(), s.atoms.end());
      }
      return out;
    }
    default:
      break;
  }
  AtomSet S = x.params();
  for (const auto& p : x.params()) {
    AtomSet smaller = S;
    smaller.erase(p);
    if (supports(b, x, smaller)) S = std::move(smaller);
  }
  return Support{std::move(S)};
}

std::vector<Expr> definable_subsets(const Backend& b, const Expr& X, const AtomSet& T, std::uint64_t budget) {
  auto orbits = orbit_decomposition(b, X, T);
  const std::size_t k = orbits.size();
  const std::uint64_t count = k >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << k;
  if (count > budget) {
    throw ResourceError(std::to_string(k) + " orbits give " + (k >= 64 ? "2^" + std::to_string(k) : std::to_string(count)) +
                            " subsets, above the budget of " + std::to_string(budget),
                        count);
  }
  std::vector<Expr> out;
  for (std::uint64_t mask = 0; mask < count; ++mask) out.push_back(union_of(orbits, mask));
  return out;
}

// ---------------------------------------------------------------- functions

const Expr& first(const Expr& pair) {
  if (pair.kind() != Expr::Kind::Tuple || pair.items().size() != 2)
    throw ValidationError("graph element " + to_string(pair) + " is not a pair");
  return pair.items()[0];
}

const Expr& second(const Expr& pair) {
  first(pair);
  return pair.items()[1];
}

DefFunction make_function(Expr dom, Expr cod, Expr graph) {
  if (!dom.is_set() || !cod.is_set() || !graph.is_set())
    throw ValidationError("domain, codomain and graph must be sets");
  for (const auto& c : clauses(graph)) first(c.element);
  return DefFunction{std::move(dom), std::move(cod), std::move(graph), std::nullopt};
}

namespace {

template <typename Key, typename Value>
bool unique_on(const Backend& b, const Expr& G, Key key, Value value) {
  return sat(b, forall_in(G, [&](const Expr& p) {
               return forall_in(
                   G, [&](const Expr& q) { return equality_formula(key(p), key(q)); },
                   [&](const Expr& q) { return equality_formula(value(p), value(q)); });
             }));
}

}  // namespace

bool graph_functional(const Backend& b, const Expr& G) {
  return unique_on(b, G, [](const Expr& p) -> const Expr& { return first(p); },
                   [](const Expr& p) -> const Expr& { return second(p); });
}

bool graph_injective(const Backend& b, const Expr& G) {
  return unique_on(b, G, [](const Expr& p) -> const Expr& { return second(p); },
                   [](const Expr& p) -> const Expr& { return first(p); });
}

FunctionFlags fn_check(const Backend& b, const DefFunction& f) {
  FunctionFlags flags;
  const auto& G = f.graph;
  flags.contained = sat(b, forall_in(G, [&](const Expr& p) {
                          return conj(member_formula(first(p), f.dom), member_formula(second(p), f.cod));
                        }));
  flags.total = sat(b, forall_in(f.dom, [&](const Expr& x) {
                      return exists_in(G, [&](const Expr& p) { return equality_formula(first(p), x); });
                    }));
  flags.surjective = sat(b, forall_in(f.cod, [&](const Expr& y) {
                           return exists_in(G, [&](const Expr& p) { return equality_formula(second(p), y); });
                         }));
  flags.functional = graph_functional(b, G);
  flags.injective = graph_injective(b, G);
  return flags;
}

DefFunction checked(const Backend& b, DefFunction f) {
  f.checked = fn_check(b, f);
  return f;
}

Expr fn_apply(const Backend& b, const DefFunction& f, const Expr& x) {
  for (const auto& c : clauses(f.graph)) {
    auto oc = open_clause(c);
    auto cs = conjuncts(oc.guard);
    cs.push_back(equality_formula(first(oc.element), x));
    auto w = find_witness(b, conj(cs), oc.binders);
    if (w) return substitute(second(oc.element), *w);
  }
  throw DomainError(to_string(x) + " is not in the domain of the function");
}

bool in_domain_of(const Backend& b, const DefFunction& f, const Expr& x) {
  return sat(b, exists_in(f.graph, [&](const Expr& p) { return equality_formula(first(p), x); }));
}

DefFunction inverse(const DefFunction& f) {
  std::vector<Comp> comps;
  for (const auto& c : clauses(f.graph))
    comps.push_back(Comp{Expr::tuple({second(c.element), first(c.element)}), c.binders, c.guard});
  DefFunction g{f.cod, f.dom, Expr::set(std::move(comps)), std::nullopt};
  if (f.checked) {
    FunctionFlags fl = *f.checked;
    std::swap(fl.functional, fl.injective);
    std::swap(fl.total, fl.surjective);
    g.checked = fl;
  }
  return g;
}

}  // namespace atomiso
