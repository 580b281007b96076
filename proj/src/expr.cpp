#include "atomiso/expr.hpp"

#include <algorithm>

#include "atomiso/errors.hpp"

namespace atomiso {

struct Expr::Node {
  Kind kind = Kind::Atoms;
  Atom atom;
  std::string name;
  std::vector<Expr> items;
  std::vector<Comp> comps;
  std::vector<std::string> free;
  AtomSet params;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

void merge_into(std::vector<std::string>& out, const std::vector<std::string>& more) {
  std::vector<std::string> merged;
  std::set_union(out.begin(), out.end(), more.begin(), more.end(), std::back_inserter(merged));
  out.swap(merged);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

Expr Expr::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = a;
  n->params.insert(a);
  n->hash = mix(1, std::hash<Atom>{}(a));
  return Expr(std::move(n));
}

Expr Expr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->free.push_back(name);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::atoms() {
  static const Expr kAtoms = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atoms;
    n->hash = 3;
    return Expr(std::move(n));
  }();
  return kAtoms;
}

Expr Expr::tuple(std::vector<Expr> items) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tuple;
  std::size_t h = 4;
  for (const auto& e : items) {
    h = mix(h, e.hash());
    merge_into(n->free, e.free_vars());
    n->params.insert(e.params().begin(), e.params().end());
  }
  n->hash = h;
  n->items = std::move(items);
  return Expr(std::move(n));
}

Expr Expr::raw_set(std::vector<Comp> comps) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  std::size_t h = 5;
  for (const auto& c : comps) {
    std::size_t ch = mix(c.element.hash(), c.guard.hash());
    for (const auto& b : c.binders) ch = mix(ch, std::hash<std::string>{}(b));
    h = mix(h, ch);
    std::vector<std::string> free = c.element.free_vars();
    merge_into(free, c.guard.free_vars());
    for (const auto& f : free)
      if (!contains(c.binders, f)) n->free.push_back(f);
    n->params.insert(c.element.params().begin(), c.element.params().end());
    collect_constants(c.guard, n->params);
  }
  std::sort(n->free.begin(), n->free.end());
  n->free.erase(std::unique(n->free.begin(), n->free.end()), n->free.end());
  n->hash = h;
  n->comps = std::move(comps);
  return Expr(std::move(n));
}

Expr Expr::set(std::vector<Comp> comps) {
  std::vector<std::pair<std::string, Comp>> keyed;
  for (auto& c : comps) {
    if (c.guard.is_false()) continue;
    std::vector<std::string> used;
    for (const auto& b : c.binders) {
      if (contains(used, b)) throw ValidationError("duplicate binder '" + b + "'");
      used.push_back(b);
    }
    std::vector<std::string> kept;
    for (const auto& b : c.binders)
      if (std::binary_search(c.element.free_vars().begin(), c.element.free_vars().end(), b) || c.guard.has_free(b))
        kept.push_back(b);
    c.binders = std::move(kept);
    auto key = to_string(c);
    keyed.emplace_back(std::move(key), std::move(c));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Comp> out;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (i > 0 && keyed[i].first == keyed[i - 1].first && keyed[i].second == out.back()) continue;
    out.push_back(std::move(keyed[i].second));
  }
  return raw_set(std::move(out));
}

Expr Expr::empty() { return raw_set({}); }

Expr Expr::comp(Expr element, std::vector<std::string> binders, Formula guard) {
  return set({Comp{std::move(element), std::move(binders), std::move(guard)}});
}

Expr Expr::enumerate(std::vector<Expr> elements) {
  std::vector<Comp> comps;
  for (auto& e : elements) comps.push_back(Comp{std::move(e), {}, truth()});
  return set(std::move(comps));
}

Expr Expr::term(const Term& t) { return t.is_var() ? var(t.name()) : atom(t.atom()); }

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
const Atom& Expr::atom_value() const { return node_->atom; }
const std::string& Expr::var_name() const { return node_->name; }
const std::vector<Expr>& Expr::items() const { return node_->items; }
const std::vector<Comp>& Expr::comps() const { return node_->comps; }
const std::vector<std::string>& Expr::free_vars() const noexcept { return node_->free; }
const AtomSet& Expr::params() const noexcept { return node_->params; }
std::size_t Expr::hash() const noexcept { return node_->hash; }

Term Expr::as_term() const {
  if (kind() == Kind::Atom) return Term::constant(atom_value());
  if (kind() == Kind::Var) return Term::var(var_name());
  throw InternalError("set or tuple used as an atom term");
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind) return false;
  return x.atom == y.atom && x.name == y.name && x.items == y.items && x.comps == y.comps;
}

// ---------------------------------------------------------------- printing

namespace {

void print(const Expr& e, std::string& out);

bool trivial(const Comp& c) { return c.binders.empty() && c.guard.is_true(); }

void print_comp(const Comp& c, std::string& out) {
  out += "{";
  print(c.element, out);
  if (trivial(c)) {
    out += "}";
    return;
  }
  out += " | ";
  if (c.binders.empty()) {
    // A dummy binder keeps the clause inside the grammar.
    auto used = names_in(Expr::raw_set({c}));
    std::string z = "z";
    for (int i = 1; used.count(z); ++i) z = "z" + std::to_string(i);
    out += z;
  } else {
    for (std::size_t i = 0; i < c.binders.size(); ++i) {
      if (i) out += ", ";
      out += c.binders[i];
    }
  }
  out += " in atoms";
  if (!c.guard.is_true()) {
    out += ", ";
    out += to_string(c.guard);
  }
  out += "}";
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Atom:
      out += e.atom_value().str();
      return;
    case Expr::Kind::Var:
      out += e.var_name();
      return;
    case Expr::Kind::Atoms:
      out += "atoms";
      return;
    case Expr::Kind::Tuple:
      out += "(";
      for (std::size_t i = 0; i < e.items().size(); ++i) {
        if (i) out += ", ";
        print(e.items()[i], out);
      }
      out += ")";
      return;
    case Expr::Kind::Union: {
      if (e.comps().empty()) {
        out += "empty";
        return;
      }
      std::vector<std::string> literal;
      std::vector<std::string> rest;
      for (const auto& c : e.comps()) {
        std::string s;
        if (trivial(c)) {
          print(c.element, s);
          literal.push_back(std::move(s));
        } else {
          print_comp(c, s);
          rest.push_back(std::move(s));
        }
      }
      std::sort(literal.begin(), literal.end());
      std::sort(rest.begin(), rest.end());
      bool first = true;
      if (!literal.empty()) {
        out += "{";
        for (std::size_t i = 0; i < literal.size(); ++i) {
          if (i) out += ", ";
          out += literal[i];
        }
        out += "}";
        first = false;
      }
      for (const auto& s : rest) {
        if (!first) out += " + ";
        first = false;
        out += s;
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string to_string(const Comp& c) {
  std::string out;
  print_comp(c, out);
  return out;
}

// ---------------------------------------------------------------- rewriting

std::vector<Comp> clauses(const Expr& e) {
  if (e.kind() == Expr::Kind::Atoms) return {Comp{Expr::var("a"), {"a"}, truth()}};
  if (e.kind() == Expr::Kind::Union) return e.comps();
  throw InternalError("clauses of a non-set expression " + to_string(e));
}

namespace {

Comp rename_binders(const Comp& c, const std::map<std::string, std::string>& names) {
  std::map<std::string, Term> s;
  Comp out{c.element, {}, c.guard};
  for (const auto& b : c.binders) {
    auto it = names.find(b);
    if (it == names.end()) {
      out.binders.push_back(b);
      continue;
    }
    s.emplace(b, Term::var(it->second));
    out.binders.push_back(it->second);
  }
  out.element = substitute(c.element, s);
  out.guard = substitute(c.guard, s);
  return out;
}

}  // namespace

Comp open_clause(const Comp& c) {
  std::map<std::string, std::string> names;
  for (const auto& b : c.binders) names.emplace(b, fresh_var(b.rfind('_', 0) == 0 ? "v" : b));
  return rename_binders(c, names);
}

Expr substitute(const Expr& e, const std::map<std::string, Term>& s) {
  if (s.empty()) return e;
  const auto& fv = e.free_vars();
  if (std::none_of(fv.begin(), fv.end(), [&](const std::string& v) { return s.count(v) != 0; })) return e;
  switch (e.kind()) {
    case Expr::Kind::Var: {
      auto it = s.find(e.var_name());
      return it == s.end() ? e : Expr::term(it->second);
    }
    case Expr::Kind::Tuple: {
      std::vector<Expr> items;
      for (const auto& i : e.items()) items.push_back(substitute(i, s));
      return Expr::tuple(std::move(items));
    }
    case Expr::Kind::Union: {
      std::vector<Comp> comps;
      for (const auto& c : e.comps()) {
        auto inner = s;
        for (const auto& b : c.binders) inner.erase(b);
        Comp cur = c;
        std::map<std::string, std::string> clash;
        for (const auto& [name, t] : inner)
          if (t.is_var() && contains(c.binders, t.name())) clash.emplace(t.name(), fresh_var("v"));
        if (!clash.empty()) cur = rename_binders(cur, clash);
        cur.element = substitute(cur.element, inner);
        cur.guard = substitute(cur.guard, inner);
        if (!cur.guard.is_false()) comps.push_back(std::move(cur));
      }
      return Expr::raw_set(std::move(comps));
    }
    default:
      return e;
  }
}

Expr substitute(const Expr& e, const Valuation& val) {
  std::map<std::string, Term> s;
  for (const auto& [k, v] : val) s.emplace(k, Term::constant(v));
  return substitute(e, s);
}

namespace {

Expr replace_params(const Expr& e, const std::map<Atom, Term>& map) {
  if (map.empty()) return e;
  const auto& ps = e.params();
  if (std::none_of(ps.begin(), ps.end(), [&](const Atom& a) { return map.count(a) != 0; })) return e;
  switch (e.kind()) {
    case Expr::Kind::Atom: {
      auto it = map.find(e.atom_value());
      return it == map.end() ? e : Expr::term(it->second);
    }
    case Expr::Kind::Tuple: {
      std::vector<Expr> items;
      for (const auto& i : e.items()) items.push_back(replace_params(i, map));
      return Expr::tuple(std::move(items));
    }
    case Expr::Kind::Union: {
      std::vector<Comp> comps;
      for (const auto& c : e.comps())
        comps.push_back(Comp{replace_params(c.element, map), c.binders, replace_constants(c.guard, map)});
      return Expr::raw_set(std::move(comps));
    }
    default:
      return e;
  }
}

}  // namespace

Expr rename_params(const Expr& e, const AtomMap& map) {
  std::map<Atom, Term> terms;
  for (const auto& [k, v] : map) terms.emplace(k, Term::constant(v));
  return replace_params(e, terms);
}

Expr abstract_params(const Expr& e, const std::map<Atom, std::string>& names) {
  std::map<Atom, Term> terms;
  for (const auto& [k, v] : names) terms.emplace(k, Term::var(v));
  return replace_params(e, terms);
}

Expr act(const AtomMap& pi, const Expr& e) {
  for (const auto& p : e.params())
    if (!pi.count(p)) throw DomainError("parameter " + p.str() + " is outside the domain of the atom map");
  return rename_params(e, pi);
}

namespace {

void collect_names(const Formula& f, std::set<std::string>& out) {
  for (const auto& v : f.free_vars()) out.insert(v);
  collect_bound_vars(f, out);
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      out.insert(e.var_name());
      return;
    case Expr::Kind::Tuple:
      for (const auto& i : e.items()) collect_names(i, out);
      return;
    case Expr::Kind::Union:
      for (const auto& c : e.comps()) {
        out.insert(c.binders.begin(), c.binders.end());
        collect_names(c.element, out);
        collect_names(c.guard, out);
      }
      return;
    default:
      return;
  }
}

}  // namespace

std::set<std::string> names_in(const Expr& e) {
  std::set<std::string> out;
  collect_names(e, out);
  return out;
}

std::optional<std::vector<Expr>> atomic_leaves(const Expr& e) {
  if (e.is_atomic()) return std::vector<Expr>{e};
  if (e.kind() != Expr::Kind::Tuple) return std::nullopt;
  std::vector<Expr> out;
  for (const auto& i : e.items()) {
    auto sub = atomic_leaves(i);
    if (!sub) return std::nullopt;
    out.insert(out.end(), sub->begin(), sub->end());
  }
  return out;
}

void validate(const Expr& e, const Backend& b) {
  for (const auto& p : e.params()) b.validate(p);
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.kind() == Expr::Kind::Tuple) {
      for (const auto& i : x.items()) walk(i);
    } else if (x.kind() == Expr::Kind::Union) {
      for (const auto& c : x.comps()) {
        b.validate(c.guard);
        walk(c.element);
      }
    }
  };
  walk(e);
}

}  // namespace atomiso
