#pragma once

// Finite-sample semantics for set expressions, independent of the compiler.
//
// A set at nesting level d is evaluated with its binders ranging over the pool
// P_d, where P_d realises every k-type over P_{d-1} (k = the largest number of
// binders in one clause). When every binder of a clause occurs as a leaf of its
// element (through tuples and finite set literals only), the truncated value
// of X is exactly X restricted to the elements supported by P_d, and two sets
// are equal iff their truncations are. The generator below only produces
// expressions of that shape.

#include <functional>
#include <random>

#include "atomiso/expr.hpp"
#include "oracle.hpp"

namespace oracle {

using atomiso::Comp;
using atomiso::Expr;

struct Value {
  enum class Kind : std::uint8_t { Atom, Tuple, Set };
  Kind kind = Kind::Atom;
  Atom atom;
  std::vector<Value> items;

  friend bool operator==(const Value&, const Value&) = default;
  friend auto operator<=>(const Value& a, const Value& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    return std::lexicographical_compare_three_way(a.items.begin(), a.items.end(), b.items.begin(), b.items.end());
  }
};

inline std::vector<Atom> refine(const std::string& backend, const std::vector<Atom>& prev, std::size_t k) {
  std::set<Atom> next(prev.begin(), prev.end());
  if (backend == "equality") {
    std::int64_t top = 0;
    for (const auto& a : prev) top = std::max<std::int64_t>(top, a.value().num());
    for (std::size_t i = 1; i <= k; ++i) next.insert(Atom::id(static_cast<std::uint64_t>(top) + i));
  } else if (prev.empty()) {
    for (std::size_t i = 0; i < k; ++i) next.insert(Atom::rational(Rational(static_cast<std::int64_t>(i))));
  } else {
    const auto kk = static_cast<std::int64_t>(k);
    for (std::size_t g = 0; g + 1 < prev.size(); ++g) {
      auto lo = prev[g].value(), hi = prev[g + 1].value();
      for (std::int64_t i = 1; i <= kk; ++i) next.insert(Atom::rational(lo + (hi - lo) * Rational(i, kk + 1)));
    }
    for (std::int64_t i = 1; i <= kk; ++i) {
      next.insert(Atom::rational(prev.back().value() + Rational(i)));
      if (backend == "dlo") next.insert(Atom::rational(prev.front().value() - Rational(i)));
    }
  }
  return {next.begin(), next.end()};
}

inline std::size_t max_binders(const Expr& e) {
  std::size_t k = 0;
  if (e.kind() == Expr::Kind::Tuple)
    for (const auto& i : e.items()) k = std::max(k, max_binders(i));
  if (e.kind() == Expr::Kind::Union)
    for (const auto& c : e.comps()) k = std::max({k, c.binders.size(), max_binders(c.element)});
  if (e.kind() == Expr::Kind::Atoms) k = std::max<std::size_t>(k, 1);
  return k;
}

class ExprEvaluator {
 public:
  ExprEvaluator(std::string backend, const atomiso::AtomSet& params, std::size_t k, std::size_t depth)
      : backend_(std::move(backend)) {
    pools_.emplace_back(params.begin(), params.end());
    for (std::size_t d = 0; d < depth; ++d) pools_.push_back(refine(backend_, pools_.back(), std::max<std::size_t>(k, 1)));
  }

  const std::vector<Atom>& pool(std::size_t level) const { return pools_.at(level); }

  Value eval(const Expr& e, std::map<std::string, Atom>& env, std::size_t level = 1) const {
    Value v;
    switch (e.kind()) {
      case Expr::Kind::Atom:
        v.atom = e.atom_value();
        return v;
      case Expr::Kind::Var:
        v.atom = env.at(e.var_name());
        return v;
      case Expr::Kind::Tuple:
        v.kind = Value::Kind::Tuple;
        for (const auto& i : e.items()) v.items.push_back(eval(i, env, level));
        return v;
      case Expr::Kind::Atoms: {
        v.kind = Value::Kind::Set;
        for (const auto& a : pool(level)) v.items.push_back(Value{Value::Kind::Atom, a, {}});
        return v;
      }
      case Expr::Kind::Union: {
        std::set<Value> out;
        for (const auto& c : e.comps()) {
          auto saved = env;
          for (const auto& val : all_valuations(c.binders, pool(level))) {
            for (const auto& [k, a] : val) env.insert_or_assign(k, a);
            if (guard_holds(c.guard, env)) out.insert(eval(c.element, env, level + 1));
          }
          env = saved;
        }
        v.kind = Value::Kind::Set;
        v.items.assign(out.begin(), out.end());
        return v;
      }
    }
    return v;
  }

  Value eval(const Expr& e) const {
    std::map<std::string, Atom> env;
    return eval(e, env);
  }

 private:
  bool guard_holds(const Formula& g, const std::map<std::string, Atom>& env) const {
    if (g.is_true()) return true;
    std::map<std::string, Atom> val;
    for (const auto& v : g.free_vars()) val.emplace(v, env.at(v));
    return brute_sat(backend_, g, val);
  }

  std::string backend_;
  std::vector<std::vector<Atom>> pools_;
};

inline std::size_t set_depth(const Expr& e) {
  std::size_t d = 0;
  if (e.kind() == Expr::Kind::Tuple)
    for (const auto& i : e.items()) d = std::max(d, set_depth(i));
  if (e.kind() == Expr::Kind::Atoms) return 1;
  if (e.kind() == Expr::Kind::Union) {
    for (const auto& c : e.comps()) d = std::max(d, set_depth(c.element));
    return d + 1;
  }
  return d;
}

// Truth of x = y by finite-sample evaluation.
inline bool brute_equal(const std::string& backend, const Expr& x, const Expr& y) {
  atomiso::AtomSet params = x.params();
  params.insert(y.params().begin(), y.params().end());
  ExprEvaluator ev(backend, params, std::max(max_binders(x), max_binders(y)),
                   std::max(set_depth(x), set_depth(y)) + 1);
  return ev.eval(x) == ev.eval(y);
}

// Evaluation cost estimate, used to keep generated pairs laptop-sized.
inline double eval_cost(const Expr& e, const std::vector<std::size_t>& sizes, std::size_t level = 1) {
  switch (e.kind()) {
    case Expr::Kind::Tuple: {
      double c = 1;
      for (const auto& i : e.items()) c += eval_cost(i, sizes, level);
      return c;
    }
    case Expr::Kind::Atoms:
      return static_cast<double>(sizes.at(level));
    case Expr::Kind::Union: {
      double c = 1;
      for (const auto& comp : e.comps())
        c += std::pow(static_cast<double>(sizes.at(level)), static_cast<double>(comp.binders.size())) *
             (1 + eval_cost(comp.element, sizes, level + 1));
      return c;
    }
    default:
      return 1;
  }
}

// Rebuilds a raw formula with the folding constructors.
inline Formula fold(const Formula& f) {
  using atomiso::Connective;
  switch (f.kind()) {
    case Connective::Rel:
      return atomiso::rel(f.relation(), f.args());
    case Connective::Not:
      return atomiso::neg(fold(f.children().at(0)));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> kids;
      for (const auto& c : f.children()) kids.push_back(fold(c));
      return f.kind() == Connective::And ? atomiso::conj(kids) : atomiso::disj(kids);
    }
    case Connective::Implies:
      return atomiso::implies(fold(f.children().at(0)), fold(f.children().at(1)));
    case Connective::Iff:
      return atomiso::iff(fold(f.children().at(0)), fold(f.children().at(1)));
    case Connective::Exists:
      return atomiso::exists(f.bound_var(), fold(f.body()));
    case Connective::Forall:
      return atomiso::forall(f.bound_var(), fold(f.body()));
    default:
      return f;
  }
}

// Random closed expressions in the shape the evaluator handles exactly.
class ExprGen {
 public:
  ExprGen(std::string backend, std::uint64_t seed) : backend_(std::move(backend)), formulas_(backend_, seed ^ 0x5eed), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Atom param(int i) const { return formulas_.constant(static_cast<std::size_t>(i)); }

  Expr set(const std::vector<std::string>& scope, int depth) {
    int k = uniform(0, 9);
    if (k == 0) return Expr::atoms();
    if (k == 1) {
      std::vector<Expr> els;
      int n = uniform(1, 2);
      for (int i = 0; i < n; ++i) els.push_back(element(scope, {}, depth));
      return Expr::enumerate(std::move(els));
    }
    std::vector<Comp> comps;
    int n = uniform(1, 2);
    for (int i = 0; i < n; ++i) comps.push_back(comp(scope, depth));
    return Expr::set(std::move(comps));
  }

  Comp comp(const std::vector<std::string>& scope, int depth) {
    std::size_t nb = static_cast<std::size_t>(uniform(1, depth >= 2 ? 2 : 3));
    std::vector<std::string> binders;
    for (std::size_t i = 0; i < nb; ++i) binders.push_back(fresh());
    auto inner = scope;
    inner.insert(inner.end(), binders.begin(), binders.end());
    auto el = element(inner, binders, depth);
    return Comp{el, binders, guard(inner)};
  }

  // Element mentioning every name of `must` as a leaf.
  Expr element(const std::vector<std::string>& scope, const std::vector<std::string>& must, int depth) {
    std::vector<Expr> leaves;
    for (const auto& m : must) leaves.push_back(Expr::var(m));
    if (must.empty() || coin(0.3)) leaves.push_back(atomic(scope));
    if (depth > 1 && coin(0.35)) leaves.push_back(set(scope, depth - 1));
    std::shuffle(leaves.begin(), leaves.end(), rng_);
    if (leaves.size() == 1) return leaves.front();
    if (coin(0.6)) return Expr::tuple(std::move(leaves));
    return Expr::enumerate(std::move(leaves));
  }

  Expr atomic(const std::vector<std::string>& scope) {
    if (!scope.empty() && coin(0.6)) return Expr::var(scope[static_cast<std::size_t>(uniform(0, static_cast<int>(scope.size()) - 1))]);
    return Expr::atom(param(uniform(0, 1)));
  }

  Formula guard(const std::vector<std::string>& scope) {
    int n = uniform(0, 2);
    std::vector<Formula> lits;
    for (int i = 0; i < n; ++i) {
      auto f = formulas_.formula(scope, 1, 0);
      lits.push_back(coin(0.3) ? atomiso::neg(f) : f);
    }
    return fold(coin(0.7) ? atomiso::conj(lits) : atomiso::disj(lits));
  }

  std::string fresh() { return std::string(1, static_cast<char>('a' + counter_++ % 20)) + std::to_string(counter_ / 20); }

  FormulaGen& formulas() { return formulas_; }

 private:
  std::string backend_;
  FormulaGen formulas_;
  std::mt19937_64 rng_;
  int counter_ = 0;
};

// Semantics-preserving and mutating rewrites.
class Rewriter {
 public:
  explicit Rewriter(ExprGen& gen) : gen_(gen) {}

  // Returns a rewritten copy and whether the rewrite is meant to preserve meaning.
  Expr preserve(const Expr& e) {
    if (e.kind() == Expr::Kind::Atoms && gen_.coin()) {
      auto a = gen_.fresh();
      return Expr::comp(Expr::var(a), {a}, atomiso::truth());
    }
    if (e.kind() == Expr::Kind::Tuple) {
      std::vector<Expr> items;
      for (const auto& i : e.items()) items.push_back(preserve(i));
      return Expr::tuple(std::move(items));
    }
    if (e.kind() != Expr::Kind::Union) return e;
    std::vector<Comp> comps;
    for (const auto& c : e.comps()) {
      // rename binders
      std::map<std::string, atomiso::Term> ren;
      std::vector<std::string> binders;
      for (const auto& b : c.binders) {
        binders.push_back(gen_.fresh());
        ren.emplace(b, atomiso::Term::var(binders.back()));
      }
      Comp r{preserve(atomiso::substitute(c.element, ren)), binders, atomiso::substitute(c.guard, ren)};
      int k = gen_.uniform(0, 3);
      if (k == 0 && !r.binders.empty()) {
        // split on a random literal
        std::vector<std::string> scope = r.binders;
        auto split = gen_.formulas().formula(scope, 0, 0);
        comps.push_back(Comp{r.element, r.binders, atomiso::conj(r.guard, split)});
        comps.push_back(Comp{r.element, r.binders, atomiso::conj(r.guard, atomiso::neg(split))});
      } else if (k == 1) {
        comps.push_back(r);
        comps.push_back(r);
      } else if (k == 2 && r.binders.size() >= 2) {
        std::reverse(r.binders.begin(), r.binders.end());
        comps.push_back(r);
      } else {
        comps.push_back(r);
      }
    }
    std::shuffle(comps.begin(), comps.end(), gen_.rng());
    return Expr::raw_set(std::move(comps));
  }

  Expr mutate(const Expr& e) {
    if (e.kind() == Expr::Kind::Atom) return Expr::atom(e.atom_value() == gen_.param(0) ? gen_.param(1) : gen_.param(0));
    if (e.kind() == Expr::Kind::Var || e.kind() == Expr::Kind::Atoms) return e;
    if (e.kind() == Expr::Kind::Tuple) {
      auto items = e.items();
      std::size_t i = static_cast<std::size_t>(gen_.uniform(0, static_cast<int>(items.size()) - 1));
      if (gen_.coin(0.3) && items.size() >= 2) {
        std::swap(items[0], items[1]);
      } else {
        items[i] = mutate(items[i]);
      }
      return Expr::tuple(std::move(items));
    }
    auto comps = e.comps();
    if (comps.empty()) return Expr::atoms();
    std::size_t i = static_cast<std::size_t>(gen_.uniform(0, static_cast<int>(comps.size()) - 1));
    switch (gen_.uniform(0, 3)) {
      case 0:
        comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      case 1: {
        auto lits = atomiso::conjuncts(comps[i].guard);
        if (lits.empty()) {
          comps[i].guard = gen_.formulas().formula(comps[i].binders, 0, 0);
        } else {
          lits[0] = atomiso::neg(lits[0]);
          comps[i].guard = atomiso::conj(lits);
        }
        break;
      }
      case 2:
        comps[i].element = mutate(comps[i].element);
        break;
      default:
        comps.push_back(Comp{gen_.atomic({}), {}, atomiso::truth()});
    }
    return Expr::raw_set(std::move(comps));
  }

 private:
  ExprGen& gen_;
};

}  // namespace oracle
