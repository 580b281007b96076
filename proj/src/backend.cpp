#include "atomiso/backend.hpp"

#include <algorithm>
#include <cstdlib>
#include <tuple>

#include "atomiso/errors.hpp"

namespace atomiso {

namespace {

auto simplicity(const Rational& q) { return std::make_tuple(q.den(), std::llabs(q.num()), q); }

void sort_by_simplicity(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return simplicity(a.value()) < simplicity(b.value()); });
}

// The n simplest rationals in (lo, hi), ascending.
std::vector<Rational> simplest_points(std::optional<Rational> lo, std::optional<Rational> hi, std::size_t n) {
  std::vector<std::pair<std::optional<Rational>, std::optional<Rational>>> gaps{{lo, hi}};
  std::vector<Rational> out;
  while (out.size() < n) {
    std::size_t best = 0;
    Rational best_point = simplest_between(gaps[0].first, gaps[0].second);
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      auto p = simplest_between(gaps[i].first, gaps[i].second);
      if (simplicity(p) < simplicity(best_point)) {
        best = i;
        best_point = p;
      }
    }
    auto [l, h] = gaps[best];
    gaps.erase(gaps.begin() + static_cast<std::ptrdiff_t>(best));
    gaps.push_back({l, best_point});
    gaps.push_back({best_point, h});
    out.push_back(best_point);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Rebuilds a quantifier-free formula with every relation literal replaced.
Formula map_literals(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  switch (f.kind()) {
    case Connective::True:
    case Connective::False:
      return f;
    case Connective::Rel:
      return fn(f);
    case Connective::Not:
      return neg(map_literals(f.children()[0], fn));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(map_literals(k, fn));
      return f.kind() == Connective::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Connective::Implies:
      return implies(map_literals(f.children()[0], fn), map_literals(f.children()[1], fn));
    case Connective::Iff:
      return iff(map_literals(f.children()[0], fn), map_literals(f.children()[1], fn));
    default:
      throw InternalError("map_literals on quantified formula");
  }
}

// Terms other than `var` that share a literal with `var`.
std::vector<Term> partner_terms(const Formula& f, const std::string& var) {
  std::vector<Term> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Connective::Rel) {
      bool mentions = false;
      for (const auto& t : g.args()) mentions = mentions || (t.is_var() && t.name() == var);
      if (!mentions) return;
      for (const auto& t : g.args()) {
        if (t.is_var() && t.name() == var) continue;
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
      }
      return;
    }
    for (const auto& k : g.children()) walk(k);
  };
  walk(f);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_var(const Term& t, const std::string& v) { return t.is_var() && t.name() == v; }

// Bottom-up elimination driver: `eliminate` handles exists var. (qf body).
Formula qe_with(const Formula& f, const std::function<Formula(const std::string&, const Formula&)>& eliminate) {
  switch (f.kind()) {
    case Connective::True:
    case Connective::False:
      return f;
    case Connective::Rel:
      return rel(f.relation(), f.args());
    case Connective::Not:
      return neg(qe_with(f.children()[0], eliminate));
    case Connective::And:
    case Connective::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(qe_with(k, eliminate));
      return f.kind() == Connective::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Connective::Implies:
      return implies(qe_with(f.children()[0], eliminate), qe_with(f.children()[1], eliminate));
    case Connective::Iff:
      return iff(qe_with(f.children()[0], eliminate), qe_with(f.children()[1], eliminate));
    case Connective::Exists:
      return eliminate(f.bound_var(), qe_with(f.body(), eliminate));
    case Connective::Forall:
      return neg(eliminate(f.bound_var(), neg(qe_with(f.body(), eliminate))));
  }
  return f;
}

// exists x. body over the pure set: x equals one of its partners or is fresh.
Formula eliminate_equality(const std::string& x, const Formula& body) {
  if (!body.has_free(x)) return body;
  std::vector<Formula> cases;
  for (const auto& t : partner_terms(body, x)) cases.push_back(substitute(body, {{x, t}}));
  cases.push_back(map_literals(body, [&](const Formula& lit) {
    const auto& a = lit.args();
    if (is_var(a[0], x) || is_var(a[1], x)) return falsity();
    return lit;
  }));
  return disj(std::move(cases));
}

// exists x. body over (Q,<): test points -inf, each partner t, and t+epsilon.
Formula eliminate_dlo(const std::string& x, const Formula& body) {
  if (!body.has_free(x)) return body;
  std::vector<Formula> cases;
  cases.push_back(map_literals(body, [&](const Formula& lit) {
    const auto& a = lit.args();
    const bool left = is_var(a[0], x);
    const bool right = is_var(a[1], x);
    if (!left && !right) return lit;
    if (lit.relation() == Relation::Eq) return falsity();
    return boolean(left);
  }));
  for (const auto& t : partner_terms(body, x)) {
    cases.push_back(substitute(body, {{x, t}}));
    cases.push_back(map_literals(body, [&](const Formula& lit) {
      const auto& a = lit.args();
      const bool left = is_var(a[0], x);
      const bool right = is_var(a[1], x);
      if (!left && !right) return lit;
      if (lit.relation() == Relation::Eq) return falsity();
      if (left) return lt(t, a[1]);
      return le(a[0], t);
    }));
  }
  return disj(std::move(cases));
}

Formula cyclic_to_order(const Formula& f) {
  switch (f.kind()) {
    case Connective::Rel: {
      if (f.relation() != Relation::Cyclic) return f;
      const auto& a = f.args();
      return disj({conj(lt(a[0], a[1]), lt(a[1], a[2])), conj(lt(a[1], a[2]), lt(a[2], a[0])),
                   conj(lt(a[2], a[0]), lt(a[0], a[1]))});
    }
    case Connective::True:
    case Connective::False:
      return f;
    case Connective::Exists:
      return exists(f.bound_var(), cyclic_to_order(f.body()));
    case Connective::Forall:
      return forall(f.bound_var(), cyclic_to_order(f.body()));
    case Connective::Not:
      return neg(cyclic_to_order(f.children()[0]));
    case Connective::Implies:
      return implies(cyclic_to_order(f.children()[0]), cyclic_to_order(f.children()[1]));
    case Connective::Iff:
      return iff(cyclic_to_order(f.children()[0]), cyclic_to_order(f.children()[1]));
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(cyclic_to_order(k));
      return f.kind() == Connective::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
  }
}

int sign(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

// ---------------------------------------------------------------- equality

class EqualityBackend final : public Backend {
 public:
  std::string_view name() const noexcept override { return "equality"; }
  bool supports(Relation r) const noexcept override { return r == Relation::Eq; }
  Atom::Kind atom_kind() const noexcept override { return Atom::Kind::Id; }
  bool dense() const noexcept override { return true; }

  std::vector<Atom> extension_candidates(const std::vector<Atom>& placed) const override {
    std::vector<Atom> out = placed;
    out.push_back(smallest_fresh(placed));
    return out;
  }

  std::vector<int> type_key(const std::vector<Atom>& tuple, const AtomSet& fixed) const override {
    std::vector<int> key;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      int idx = -1;
      int k = 0;
      for (const auto& f : fixed) {
        if (f == tuple[i]) idx = k;
        ++k;
      }
      key.push_back(idx);
      for (std::size_t j = 0; j < i; ++j) key.push_back(tuple[i] == tuple[j]);
    }
    return key;
  }

  Formula diagram(const std::vector<Term>& terms, const std::vector<Atom>& values,
                  const AtomSet& fixed) const override {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (fixed.count(values[i])) {
        lits.push_back(eq(terms[i], Term::constant(values[i])));
      } else {
        for (const auto& f : fixed) lits.push_back(neq(terms[i], Term::constant(f)));
      }
      for (std::size_t j = 0; j < i; ++j)
        lits.push_back(values[i] == values[j] ? eq(terms[j], terms[i]) : neq(terms[j], terms[i]));
    }
    return conj(std::move(lits));
  }

  Formula qe(const Formula& f) const override { return qe_with(f, eliminate_equality); }

  AtomMap independent_embedding(const AtomSet& independent_of, const AtomSet& fixed,
                                const AtomSet& atoms) const override {
    std::vector<Atom> used(independent_of.begin(), independent_of.end());
    used.insert(used.end(), fixed.begin(), fixed.end());
    used.insert(used.end(), atoms.begin(), atoms.end());
    std::sort(used.begin(), used.end());
    AtomMap out;
    for (const auto& a : atoms) {
      if (fixed.count(a)) {
        out[a] = a;
        continue;
      }
      auto f = smallest_fresh(used);
      used.insert(std::upper_bound(used.begin(), used.end(), f), f);
      out[a] = f;
    }
    return out;
  }

  std::vector<Atom> independent_atoms(const AtomSet& S, std::size_t n) const override {
    std::vector<Atom> used(S.begin(), S.end());
    std::vector<Atom> out;
    while (out.size() < n) {
      auto f = smallest_fresh(used);
      used.insert(std::upper_bound(used.begin(), used.end(), f), f);
      out.push_back(f);
    }
    return out;
  }

 private:
  static Atom smallest_fresh(const std::vector<Atom>& sorted) {
    std::uint64_t candidate = 1;
    for (const auto& a : sorted) {
      if (a.kind() != Atom::Kind::Id) continue;
      if (a.id_value() == candidate) {
        ++candidate;
      } else if (a.id_value() > candidate) {
        break;
      }
    }
    return Atom::id(candidate);
  }
};

// ---------------------------------------------------------------- dlo

class DloBackend : public Backend {
 public:
  std::string_view name() const noexcept override { return "dlo"; }
  bool supports(Relation r) const noexcept override { return r != Relation::Cyclic; }
  Atom::Kind atom_kind() const noexcept override { return Atom::Kind::Rational; }
  bool dense() const noexcept override { return true; }

  std::vector<Atom> extension_candidates(const std::vector<Atom>& placed) const override {
    std::vector<Atom> out = placed;
    if (placed.empty()) {
      out.push_back(Atom::rational(Rational(0)));
      return out;
    }
    std::vector<Atom> fresh;
    fresh.push_back(Atom::rational(simplest_between(std::nullopt, placed.front().value())));
    for (std::size_t i = 0; i + 1 < placed.size(); ++i)
      fresh.push_back(Atom::rational(simplest_between(placed[i].value(), placed[i + 1].value())));
    fresh.push_back(Atom::rational(simplest_between(placed.back().value(), std::nullopt)));
    sort_by_simplicity(fresh);
    out.insert(out.end(), fresh.begin(), fresh.end());
    return out;
  }

  std::vector<int> type_key(const std::vector<Atom>& tuple, const AtomSet& fixed) const override {
    std::vector<int> key;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      for (const auto& f : fixed) key.push_back(sign(tuple[i].value(), f.value()));
      for (std::size_t j = 0; j < i; ++j) key.push_back(sign(tuple[i].value(), tuple[j].value()));
    }
    return key;
  }

  Formula diagram(const std::vector<Term>& terms, const std::vector<Atom>& values,
                  const AtomSet& fixed) const override {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& x = values[i];
      auto it = fixed.lower_bound(x);
      if (it != fixed.end() && *it == x) {
        lits.push_back(eq(terms[i], Term::constant(x)));
      } else {
        if (it != fixed.begin()) lits.push_back(lt(Term::constant(*std::prev(it)), terms[i]));
        if (it != fixed.end()) lits.push_back(lt(terms[i], Term::constant(*it)));
      }
      for (std::size_t j = 0; j < i; ++j) {
        switch (sign(values[j].value(), x.value())) {
          case -1:
            lits.push_back(lt(terms[j], terms[i]));
            break;
          case 0:
            lits.push_back(eq(terms[j], terms[i]));
            break;
          default:
            lits.push_back(lt(terms[i], terms[j]));
        }
      }
    }
    return conj(std::move(lits));
  }

  Formula qe(const Formula& f) const override { return qe_with(f, eliminate_dlo); }

  AtomMap independent_embedding(const AtomSet& independent_of, const AtomSet& fixed,
                                const AtomSet& atoms) const override {
    AtomMap out;
    std::vector<Rational> cuts;
    for (const auto& t : fixed) cuts.push_back(t.value());
    // Gap g spans (cuts[g-1], cuts[g]) with missing ends unbounded.
    std::map<std::size_t, std::vector<Atom>> by_gap;
    for (const auto& a : atoms) {
      if (fixed.count(a)) {
        out[a] = a;
        continue;
      }
      auto g = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), a.value()) - cuts.begin());
      by_gap[g].push_back(a);
    }
    for (auto& [g, members] : by_gap) {
      std::optional<Rational> lo = g == 0 ? std::nullopt : std::optional<Rational>(cuts[g - 1]);
      std::optional<Rational> hi = g == cuts.size() ? std::nullopt : std::optional<Rational>(cuts[g]);
      auto [rlo, rhi] = region(independent_of, lo, hi);
      auto pts = simplest_points(rlo, rhi, members.size());
      std::sort(members.begin(), members.end());
      for (std::size_t i = 0; i < members.size(); ++i) out[members[i]] = Atom::rational(pts[i]);
    }
    return out;
  }

  std::vector<Atom> independent_atoms(const AtomSet& S, std::size_t n) const override {
    auto [lo, hi] = region(S, std::nullopt, std::nullopt);
    std::vector<Atom> out;
    for (const auto& q : simplest_points(lo, hi, n)) out.push_back(Atom::rational(q));
    return out;
  }

 private:
  // Open interval inside (lo, hi) free of S: between the two least S points
  // in the gap, above the only one, or the whole gap.
  static std::pair<std::optional<Rational>, std::optional<Rational>> region(const AtomSet& S,
                                                                            std::optional<Rational> lo,
                                                                            std::optional<Rational> hi) {
    std::vector<Rational> inside;
    for (const auto& s : S) {
      if ((!lo || *lo < s.value()) && (!hi || s.value() < *hi)) inside.push_back(s.value());
    }
    if (inside.size() >= 2) return {inside[0], inside[1]};
    if (inside.size() == 1) return {inside[0], hi};
    return {lo, hi};
  }
};

// ---------------------------------------------------------------- cyclic

class CyclicBackend final : public Backend {
 public:
  std::string_view name() const noexcept override { return "cyclic"; }
  bool supports(Relation r) const noexcept override { return r == Relation::Eq || r == Relation::Cyclic; }
  Atom::Kind atom_kind() const noexcept override { return Atom::Kind::Rational; }
  bool dense() const noexcept override { return false; }

  std::vector<Atom> extension_candidates(const std::vector<Atom>& placed) const override {
    std::vector<Atom> out = placed;
    if (placed.empty()) {
      out.push_back(Atom::rational(Rational(0)));
      return out;
    }
    std::vector<Atom> fresh;
    for (std::size_t i = 0; i + 1 < placed.size(); ++i)
      fresh.push_back(Atom::rational(simplest_between(placed[i].value(), placed[i + 1].value())));
    fresh.push_back(Atom::rational(simplest_between(placed.back().value(), std::nullopt)));
    sort_by_simplicity(fresh);
    out.insert(out.end(), fresh.begin(), fresh.end());
    return out;
  }

  std::vector<int> type_key(const std::vector<Atom>& tuple, const AtomSet& fixed) const override {
    std::vector<Atom> all(fixed.begin(), fixed.end());
    const std::size_t nfixed = all.size();
    all.insert(all.end(), tuple.begin(), tuple.end());
    std::vector<int> key;
    for (std::size_t i = nfixed; i < all.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) key.push_back(all[i] == all[j]);
    for (std::size_t r = nfixed; r < all.size(); ++r)
      for (std::size_t q = 0; q < r; ++q)
        for (std::size_t p = 0; p < q; ++p) {
          if (all[p] == all[q] || all[q] == all[r] || all[p] == all[r]) {
            key.push_back(-1);
          } else {
            key.push_back(holds(Relation::Cyclic, {all[p], all[q], all[r]}));
          }
        }
    return key;
  }

  Formula diagram(const std::vector<Term>& terms, const std::vector<Atom>& values,
                  const AtomSet& fixed) const override {
    std::vector<Formula> lits;
    std::vector<std::pair<Term, Atom>> distinct;
    for (const auto& f : fixed) distinct.emplace_back(Term::constant(f), f);
    const std::size_t nfixed = distinct.size();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (fixed.count(values[i])) {
        lits.push_back(eq(terms[i], Term::constant(values[i])));
      } else {
        for (const auto& f : fixed) lits.push_back(neq(terms[i], Term::constant(f)));
      }
      bool seen = fixed.count(values[i]) != 0;
      for (std::size_t j = 0; j < i; ++j) {
        lits.push_back(values[i] == values[j] ? eq(terms[j], terms[i]) : neq(terms[j], terms[i]));
        seen = seen || values[i] == values[j];
      }
      if (!seen) distinct.emplace_back(terms[i], values[i]);
    }
    for (std::size_t r = nfixed; r < distinct.size(); ++r)
      for (std::size_t q = 0; q < r; ++q)
        for (std::size_t p = 0; p < q; ++p) {
          const auto& [tp, ap] = distinct[p];
          const auto& [tq, aq] = distinct[q];
          const auto& [tr, ar] = distinct[r];
          lits.push_back(holds(Relation::Cyclic, {ap, aq, ar}) ? cyc(tp, tq, tr) : cyc(tp, tr, tq));
        }
    return conj(std::move(lits));
  }

  Formula qe(const Formula& f) const override { return qe_with(cyclic_to_order(f), eliminate_dlo); }
};

// ---------------------------------------------------------------- evaluation

class Evaluator {
 public:
  explicit Evaluator(const Backend& b) : backend_(b) {}

  bool run(const Formula& f, const Valuation& val, const AtomSet& extra) {
    env_.clear();
    placed_.clear();
    for (const auto& [k, v] : val) {
      env_.emplace_back(k, v);
      placed_.push_back(v);
    }
    placed_.insert(placed_.end(), extra.begin(), extra.end());
    std::sort(placed_.begin(), placed_.end());
    placed_.erase(std::unique(placed_.begin(), placed_.end()), placed_.end());
    return eval(f);
  }

 private:
  const Atom& lookup(const Term& t) const {
    if (!t.is_var()) return t.atom();
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (it->first == t.name()) return it->second;
    throw ValuationError("no value for variable '" + t.name() + "'");
  }

  bool eval(const Formula& f) {
    switch (f.kind()) {
      case Connective::True:
        return true;
      case Connective::False:
        return false;
      case Connective::Rel: {
        std::vector<Atom> args;
        args.reserve(f.args().size());
        for (const auto& t : f.args()) args.push_back(lookup(t));
        return holds(f.relation(), args);
      }
      case Connective::Not:
        return !eval(f.children()[0]);
      case Connective::And:
        for (const auto& k : f.children())
          if (!eval(k)) return false;
        return true;
      case Connective::Or:
        for (const auto& k : f.children())
          if (eval(k)) return true;
        return false;
      case Connective::Implies:
        return !eval(f.children()[0]) || eval(f.children()[1]);
      case Connective::Iff:
        return eval(f.children()[0]) == eval(f.children()[1]);
      case Connective::Exists:
      case Connective::Forall: {
        const bool want = f.kind() == Connective::Exists;
        for (const auto& c : backend_.extension_candidates(placed_)) {
          env_.emplace_back(f.bound_var(), c);
          auto pos = std::lower_bound(placed_.begin(), placed_.end(), c);
          const bool added = pos == placed_.end() || *pos != c;
          if (added) placed_.insert(pos, c);
          const bool r = eval(f.body());
          if (added) placed_.erase(std::lower_bound(placed_.begin(), placed_.end(), c));
          env_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
    }
    return false;
  }

  const Backend& backend_;
  std::vector<std::pair<std::string, Atom>> env_;
  std::vector<Atom> placed_;
};

}  // namespace

AtomMap Backend::independent_embedding(const AtomSet&, const AtomSet&, const AtomSet&) const {
  throw DensenessError("the " + std::string(name()) + " atoms are not dense");
}

std::vector<Atom> Backend::independent_atoms(const AtomSet&, std::size_t) const {
  throw DensenessError("the " + std::string(name()) + " atoms are not dense");
}

void Backend::validate(const Atom& a) const {
  if (a.kind() != atom_kind()) {
    throw VocabularyError("atom " + a.str() + " is not an atom of the " + std::string(name()) + " backend");
  }
}

void Backend::validate(const Formula& f) const {
  if (f.kind() == Connective::Rel) {
    if (!supports(f.relation())) {
      throw VocabularyError("relation in '" + to_string(f) + "' is not in the " + std::string(name()) +
                            " vocabulary");
    }
    for (const auto& t : f.args())
      if (!t.is_var()) validate(t.atom());
    return;
  }
  for (const auto& k : f.children()) validate(k);
}

const Backend& backend(std::string_view name) {
  static const EqualityBackend kEquality;
  static const DloBackend kDlo;
  static const CyclicBackend kCyclic;
  if (name == "equality") return kEquality;
  if (name == "dlo") return kDlo;
  if (name == "cyclic") return kCyclic;
  throw VocabularyError("unknown backend '" + std::string(name) + "'");
}

bool sat(const Backend& b, const Formula& f, const Valuation& val) {
  for (const auto& v : f.free_vars())
    if (!val.count(v)) throw ValuationError("no value for free variable '" + v + "'");
  Evaluator ev(b);
  return ev.run(f, val, constants(f));
}

void enumerate_orbits(const Backend& b, const std::vector<std::string>& vars, const AtomSet& fixed,
                      const std::vector<Formula>& constraints,
                      const std::function<bool(const std::vector<Atom>&)>& visit) {
  const std::size_t n = vars.size();
  std::vector<std::vector<std::pair<Formula, AtomSet>>> at(n + 1);
  for (const auto& c : constraints) {
    int level = -1;
    for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
      if (c.has_free(vars[i])) {
        level = i;
        break;
      }
    }
    for (const auto& v : c.free_vars())
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        throw ValuationError("constraint mentions unlisted variable '" + v + "'");
    at[level + 1].emplace_back(c, constants(c));
  }
  Evaluator ev(b);
  Valuation val;
  for (const auto& [c, consts] : at[0])
    if (!ev.run(c, val, consts)) return;

  std::vector<Atom> placed(fixed.begin(), fixed.end());
  std::vector<Atom> values(n);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == n) return visit(values);
    for (const auto& c : b.extension_candidates(placed)) {
      values[i] = c;
      val[vars[i]] = c;
      bool ok = true;
      for (const auto& [g, consts] : at[i + 1]) {
        if (!ev.run(g, val, consts)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        auto pos = std::lower_bound(placed.begin(), placed.end(), c);
        const bool added = pos == placed.end() || *pos != c;
        if (added) placed.insert(pos, c);
        const bool go_on = rec(i + 1);
        if (added) placed.erase(std::lower_bound(placed.begin(), placed.end(), c));
        if (!go_on) {
          val.erase(vars[i]);
          return false;
        }
      }
    }
    val.erase(vars[i]);
    return true;
  };
  rec(0);
}

std::vector<CompleteType> complete_types(const Backend& b, const std::vector<std::string>& vars, const AtomSet& S) {
  std::vector<CompleteType> out;
  std::vector<Term> terms;
  for (const auto& v : vars) terms.push_back(Term::var(v));
  enumerate_orbits(b, vars, S, {}, [&](const std::vector<Atom>& rep) {
    out.push_back({b.diagram(terms, rep, S), rep});
    return true;
  });
  return out;
}

std::uint64_t rn_count(const Backend& b, std::size_t n) {
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i));
  std::uint64_t count = 0;
  enumerate_orbits(b, vars, {}, {}, [&](const std::vector<Atom>&) {
    ++count;
    return true;
  });
  return count;
}

std::optional<Valuation> find_witness(const Backend& b, const Formula& f, const std::vector<std::string>& vars) {
  std::optional<Valuation> found;
  enumerate_orbits(b, vars, constants(f), conjuncts(f), [&](const std::vector<Atom>& rep) {
    Valuation v;
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = rep[i];
    found = std::move(v);
    return false;
  });
  return found;
}

std::optional<Valuation> find_witness(const Backend& b, const Formula& f) {
  return find_witness(b, f, f.free_vars());
}

bool is_partial_automorphism(const Backend& b, const AtomMap& m) {
  std::vector<Atom> dom;
  std::vector<Atom> img;
  for (const auto& [k, v] : m) {
    dom.push_back(k);
    img.push_back(v);
  }
  auto sorted = img;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  return b.type_key(dom, {}) == b.type_key(img, {});
}

AtomMap extend_map(const Backend& b, AtomMap m, const AtomSet& more) {
  for (const auto& a : more) {
    if (m.count(a)) continue;
    std::vector<Atom> dom;
    std::vector<Atom> img;
    for (const auto& [k, v] : m) {
      dom.push_back(k);
      img.push_back(v);
    }
    dom.push_back(a);
    const auto want = b.type_key(dom, {});
    auto placed = img;
    std::sort(placed.begin(), placed.end());
    bool done = false;
    for (const auto& c : b.extension_candidates(placed)) {
      img.push_back(c);
      if (b.type_key(img, {}) == want) {
        m[a] = c;
        done = true;
        break;
      }
      img.pop_back();
    }
    if (!done) throw InternalError("finite partial automorphism failed to extend at " + a.str());
  }
  return m;
}

}  // namespace atomiso
