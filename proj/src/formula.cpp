#include "atomiso/formula.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>

#include "atomiso/errors.hpp"

namespace atomiso {

struct Formula::Node {
  Connective kind = Connective::True;
  Relation rel = Relation::Eq;
  std::vector<Term> args;
  std::vector<Formula> kids;
  std::string var;
  std::vector<std::string> free;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool quantifier_free = true;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t term_hash(const Term& t) {
  return t.is_var() ? std::hash<std::string>{}(t.name()) : std::hash<Atom>{}(t.atom()) * 31 + 7;
}

void merge_into(std::vector<std::string>& out, const std::vector<std::string>& more) {
  std::vector<std::string> merged;
  merged.reserve(out.size() + more.size());
  std::set_union(out.begin(), out.end(), more.begin(), more.end(), std::back_inserter(merged));
  out.swap(merged);
}

}  // namespace

std::size_t arity(Relation r) noexcept { return r == Relation::Cyclic ? 3 : 2; }

Formula::Formula() {
  static const auto kTrue = [] {
    auto n = std::make_shared<Node>();
    n->kind = Connective::True;
    n->hash = 1;
    return n;
  }();
  node_ = kTrue;
}

Connective Formula::kind() const noexcept { return node_->kind; }
Relation Formula::relation() const { return node_->rel; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const std::vector<Formula>& Formula::children() const { return node_->kids; }
const std::string& Formula::bound_var() const { return node_->var; }
const Formula& Formula::body() const { return node_->kids.front(); }
bool Formula::is_quantifier_free() const noexcept { return node_->quantifier_free; }
const std::vector<std::string>& Formula::free_vars() const noexcept { return node_->free; }
bool Formula::has_free(std::string_view var) const noexcept {
  return std::binary_search(node_->free.begin(), node_->free.end(), var,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}
std::size_t Formula::hash() const noexcept { return node_->hash; }
std::size_t Formula::size() const noexcept { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.size != y.size) return false;
  return x.rel == y.rel && x.var == y.var && x.args == y.args && x.kids == y.kids;
}

Formula Formula::make_rel(Relation r, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Connective::Rel;
  n->rel = r;
  std::size_t h = mix(11, static_cast<std::size_t>(r));
  for (const auto& t : args) {
    h = mix(h, term_hash(t));
    if (t.is_var()) n->free.push_back(t.name());
  }
  std::sort(n->free.begin(), n->free.end());
  n->free.erase(std::unique(n->free.begin(), n->free.end()), n->free.end());
  n->args = std::move(args);
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::make(Connective c, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = c;
  std::size_t h = mix(23, static_cast<std::size_t>(c));
  for (const auto& k : kids) {
    h = mix(h, k.hash());
    n->size += k.size();
    n->quantifier_free = n->quantifier_free && k.is_quantifier_free();
    merge_into(n->free, k.free_vars());
  }
  n->kids = std::move(kids);
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::make_quant(Connective c, std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = c;
  n->hash = mix(mix(37, static_cast<std::size_t>(c)), mix(std::hash<std::string>{}(var), body.hash()));
  n->size = body.size() + 1;
  n->quantifier_free = false;
  n->free = body.free_vars();
  n->free.erase(std::remove(n->free.begin(), n->free.end(), var), n->free.end());
  n->var = std::move(var);
  n->kids.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula truth() { return Formula(); }

Formula falsity() {
  static const Formula kFalse = Formula::make(Connective::False, {});
  return kFalse;
}

Formula boolean(bool b) { return b ? truth() : falsity(); }

bool holds(Relation r, const std::vector<Atom>& a) {
  switch (r) {
    case Relation::Eq:
      return a[0] == a[1];
    case Relation::Lt:
      return a[0].value() < a[1].value();
    case Relation::Le:
      return a[0].value() <= a[1].value();
    case Relation::Cyclic: {
      const auto& x = a[0].value();
      const auto& y = a[1].value();
      const auto& z = a[2].value();
      return (x < y && y < z) || (y < z && z < x) || (z < x && x < y);
    }
  }
  return false;
}

Formula rel(Relation r, std::vector<Term> args) {
  if (args.size() != arity(r)) throw VocabularyError("relation applied to wrong number of arguments");
  bool ground = std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_var(); });
  if (ground) {
    std::vector<Atom> atoms;
    for (const auto& t : args) atoms.push_back(t.atom());
    return boolean(holds(r, atoms));
  }
  switch (r) {
    case Relation::Eq:
    case Relation::Le:
      if (args[0] == args[1]) return truth();
      break;
    case Relation::Lt:
      if (args[0] == args[1]) return falsity();
      break;
    case Relation::Cyclic:
      if (args[0] == args[1] || args[1] == args[2] || args[0] == args[2]) return falsity();
      break;
  }
  return Formula::make_rel(r, std::move(args));
}

Formula eq(const Term& a, const Term& b) { return rel(Relation::Eq, {a, b}); }
Formula neq(const Term& a, const Term& b) { return neg(eq(a, b)); }
Formula lt(const Term& a, const Term& b) { return rel(Relation::Lt, {a, b}); }
Formula le(const Term& a, const Term& b) { return rel(Relation::Le, {a, b}); }
Formula cyc(const Term& a, const Term& b, const Term& c) { return rel(Relation::Cyclic, {a, b, c}); }

Formula neg(const Formula& f) {
  switch (f.kind()) {
    case Connective::True:
      return falsity();
    case Connective::False:
      return truth();
    case Connective::Not:
      return f.children().front();
    default:
      return Formula::make(Connective::Not, {f});
  }
}

namespace {

Formula junction(Connective c, std::vector<Formula> fs) {
  const Connective unit = c == Connective::And ? Connective::True : Connective::False;
  const Connective zero = c == Connective::And ? Connective::False : Connective::True;
  std::vector<Formula> flat;
  flat.reserve(fs.size());
  std::function<bool(const Formula&)> add = [&](const Formula& f) {
    if (f.kind() == zero) return false;
    if (f.kind() == unit) return true;
    if (f.kind() == c) {
      for (const auto& k : f.children())
        if (!add(k)) return false;
      return true;
    }
    for (const auto& g : flat)
      if (g == f) return true;
    flat.push_back(f);
    return true;
  };
  for (const auto& f : fs)
    if (!add(f)) return c == Connective::And ? falsity() : truth();
  if (flat.empty()) return c == Connective::And ? truth() : falsity();
  if (flat.size() == 1) return flat.front();
  return Formula::make(c, std::move(flat));
}

}  // namespace

Formula conj(std::vector<Formula> fs) { return junction(Connective::And, std::move(fs)); }

Formula disj(std::vector<Formula> fs) { return junction(Connective::Or, std::move(fs)); }

Formula conj(const Formula& a, const Formula& b) { return conj(std::vector<Formula>{a, b}); }
Formula disj(const Formula& a, const Formula& b) { return disj(std::vector<Formula>{a, b}); }

Formula implies(const Formula& a, const Formula& b) {
  if (a.is_true()) return b;
  if (a.is_false() || b.is_true()) return truth();
  if (b.is_false()) return neg(a);
  if (a == b) return truth();
  return Formula::make(Connective::Implies, {a, b});
}

Formula iff(const Formula& a, const Formula& b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false()) return neg(b);
  if (b.is_false()) return neg(a);
  if (a == b) return truth();
  return Formula::make(Connective::Iff, {a, b});
}

Formula exists(const std::string& var, const Formula& body) {
  if (!body.has_free(var)) return body;
  return Formula::make_quant(Connective::Exists, var, body);
}

Formula forall(const std::string& var, const Formula& body) {
  if (!body.has_free(var)) return body;
  return Formula::make_quant(Connective::Forall, var, body);
}

std::vector<Formula> conjuncts(const Formula& f) {
  if (f.kind() == Connective::And) return f.children();
  if (f.is_true()) return {};
  return {f};
}

namespace {

// Looks for `var = t` among the conjuncts with var in `vars`; returns the index.
std::optional<std::size_t> find_one_point(const std::vector<Formula>& cs, const std::vector<std::string>& vars,
                                          std::string& var, Term& with) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    if (c.kind() != Connective::Rel || c.relation() != Relation::Eq) continue;
    for (int side = 0; side < 2; ++side) {
      const auto& x = c.args()[side];
      const auto& t = c.args()[1 - side];
      if (!x.is_var() || x == t) continue;
      if (std::find(vars.begin(), vars.end(), x.name()) == vars.end()) continue;
      var = x.name();
      with = t;
      return i;
    }
  }
  return std::nullopt;
}

bool is_literal(const Formula& f) {
  return f.kind() == Connective::Rel ||
         (f.kind() == Connective::Not && f.children().front().kind() == Connective::Rel);
}

// Buckets formulas by the innermost variable of `vars` they mention (-1: none).
std::vector<std::vector<Formula>> bucket(const std::vector<std::string>& vars, const std::vector<Formula>& fs) {
  std::vector<std::vector<Formula>> out(vars.size() + 1);
  for (const auto& f : fs) {
    int level = -1;
    for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
      if (f.has_free(vars[i])) {
        level = i;
        break;
      }
    }
    out[level + 1].push_back(f);
  }
  for (auto& b : out) std::stable_partition(b.begin(), b.end(), is_literal);
  return out;
}

}  // namespace

Formula exists_block(const std::vector<std::string>& vars_in, std::vector<Formula> cs_in) {
  std::vector<std::string> vars = vars_in;
  std::vector<Formula> cs;
  {
    auto all = conj(std::move(cs_in));
    if (all.is_false()) return falsity();
    cs = conjuncts(all);
  }
  std::string var;
  Term with = Term::var("");
  while (auto idx = find_one_point(cs, vars, var, with)) {
    std::map<std::string, Term> s{{var, with}};
    vars.erase(std::find(vars.begin(), vars.end(), var));
    std::vector<Formula> next;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (i != *idx) next.push_back(substitute(cs[i], s));
    auto all = conj(std::move(next));
    if (all.is_false()) return falsity();
    cs = conjuncts(all);
  }
  auto levels = bucket(vars, cs);
  Formula inner = truth();
  for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
    auto here = levels[i + 1];
    here.push_back(inner);
    inner = exists(vars[i], conj(std::move(here)));
  }
  auto outer = levels[0];
  outer.push_back(inner);
  return conj(std::move(outer));
}

Formula forall_block(const std::vector<std::string>& vars_in, std::vector<Formula> hyps_in, const Formula& concl_in) {
  std::vector<std::string> vars = vars_in;
  Formula concl = concl_in;
  std::vector<Formula> hs;
  {
    auto all = conj(std::move(hyps_in));
    if (all.is_false()) return truth();
    hs = conjuncts(all);
  }
  std::string var;
  Term with = Term::var("");
  while (auto idx = find_one_point(hs, vars, var, with)) {
    std::map<std::string, Term> s{{var, with}};
    vars.erase(std::find(vars.begin(), vars.end(), var));
    std::vector<Formula> next;
    for (std::size_t i = 0; i < hs.size(); ++i)
      if (i != *idx) next.push_back(substitute(hs[i], s));
    concl = substitute(concl, s);
    auto all = conj(std::move(next));
    if (all.is_false()) return truth();
    hs = conjuncts(all);
  }
  auto levels = bucket(vars, hs);
  Formula inner = concl;
  for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
    inner = forall(vars[i], implies(conj(levels[i + 1]), inner));
  }
  return implies(conj(levels[0]), inner);
}

void collect_constants(const Formula& f, AtomSet& out) {
  if (f.kind() == Connective::Rel) {
    for (const auto& t : f.args())
      if (!t.is_var()) out.insert(t.atom());
    return;
  }
  for (const auto& k : f.children()) collect_constants(k, out);
}

AtomSet constants(const Formula& f) {
  AtomSet out;
  collect_constants(f, out);
  return out;
}

void collect_bound_vars(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Connective::Exists || f.kind() == Connective::Forall) out.insert(f.bound_var());
  for (const auto& k : f.children()) collect_bound_vars(k, out);
}

std::string fresh_var(std::string_view hint) {
  static std::atomic<std::uint64_t> counter{0};
  return "_" + std::string(hint) + std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
}

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f.kind()) {
    case Connective::Not:
      return neg(kids[0]);
    case Connective::And:
      return conj(std::move(kids));
    case Connective::Or:
      return disj(std::move(kids));
    case Connective::Implies:
      return implies(kids[0], kids[1]);
    case Connective::Iff:
      return iff(kids[0], kids[1]);
    default:
      return f;
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& s) {
  if (s.empty()) return f;
  bool touched = std::any_of(f.free_vars().begin(), f.free_vars().end(),
                             [&](const std::string& v) { return s.count(v) != 0; });
  if (!touched) return f;
  switch (f.kind()) {
    case Connective::True:
    case Connective::False:
      return f;
    case Connective::Rel: {
      std::vector<Term> args;
      for (const auto& t : f.args()) {
        if (t.is_var()) {
          auto it = s.find(t.name());
          args.push_back(it == s.end() ? t : it->second);
        } else {
          args.push_back(t);
        }
      }
      return rel(f.relation(), std::move(args));
    }
    case Connective::Exists:
    case Connective::Forall: {
      auto inner = s;
      inner.erase(f.bound_var());
      std::string v = f.bound_var();
      Formula body = f.body();
      bool capture = false;
      for (const auto& [name, t] : inner) {
        if (body.has_free(name) && t.is_var() && t.name() == v) capture = true;
      }
      if (capture) {
        auto renamed = fresh_var(v);
        body = substitute(body, {{v, Term::var(renamed)}});
        v = renamed;
      }
      body = substitute(body, inner);
      return f.kind() == Connective::Exists ? exists(v, body) : forall(v, body);
    }
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(substitute(k, s));
      return rebuild(f, std::move(kids));
    }
  }
}

Formula replace_constants(const Formula& f, const std::map<Atom, Term>& map) {
  if (map.empty()) return f;
  switch (f.kind()) {
    case Connective::True:
    case Connective::False:
      return f;
    case Connective::Rel: {
      std::vector<Term> args;
      for (const auto& t : f.args()) {
        if (!t.is_var()) {
          auto it = map.find(t.atom());
          args.push_back(it == map.end() ? t : it->second);
        } else {
          args.push_back(t);
        }
      }
      return rel(f.relation(), std::move(args));
    }
    case Connective::Exists:
    case Connective::Forall: {
      auto body = replace_constants(f.body(), map);
      return f.kind() == Connective::Exists ? exists(f.bound_var(), body) : forall(f.bound_var(), body);
    }
    default: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(replace_constants(k, map));
      return rebuild(f, std::move(kids));
    }
  }
}

Formula rename_constants(const Formula& f, const std::map<Atom, Atom>& map) {
  std::map<Atom, Term> terms;
  for (const auto& [k, v] : map) terms.emplace(k, Term::constant(v));
  return replace_constants(f, terms);
}

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Connective::Implies:
      return 1;
    case Connective::Iff:
      return 3;
    case Connective::Or:
      return 2;
    case Connective::And:
      return 3;
    case Connective::Exists:
    case Connective::Forall:
      return 0;
    case Connective::Not:
      return f.children().front().kind() == Connective::Rel &&
                     f.children().front().relation() == Relation::Eq
                 ? 5
                 : 4;
    default:
      return 5;
  }
}

void print(const Formula& f, std::string& out);

void print_child(const Formula& f, int min_prec, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    print(f, out);
    out += ')';
  } else {
    print(f, out);
  }
}

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::True:
      out += "true";
      return;
    case Connective::False:
      out += "false";
      return;
    case Connective::Rel: {
      const auto& a = f.args();
      switch (f.relation()) {
        case Relation::Eq:
          out += a[0].str() + " = " + a[1].str();
          return;
        case Relation::Lt:
          out += a[0].str() + " < " + a[1].str();
          return;
        case Relation::Le:
          out += a[0].str() + " <= " + a[1].str();
          return;
        case Relation::Cyclic:
          out += "R(" + a[0].str() + ", " + a[1].str() + ", " + a[2].str() + ")";
          return;
      }
      return;
    }
    case Connective::Not: {
      const auto& k = f.children().front();
      if (k.kind() == Connective::Rel && k.relation() == Relation::Eq) {
        out += k.args()[0].str() + " != " + k.args()[1].str();
        return;
      }
      out += "not ";
      print_child(k, 4, out);
      return;
    }
    case Connective::And:
    case Connective::Or: {
      const int p = precedence(f);
      const char* sep = f.kind() == Connective::And ? " and " : " or ";
      bool first = true;
      for (const auto& k : f.children()) {
        if (!first) out += sep;
        first = false;
        print_child(k, p + 1, out);
      }
      return;
    }
    case Connective::Implies:
      print_child(f.children()[0], 2, out);
      out += " -> ";
      print_child(f.children()[1], 1, out);
      return;
    case Connective::Iff: {
      out += "(";
      print_child(f.children()[0], 2, out);
      out += " -> ";
      print_child(f.children()[1], 1, out);
      out += ") and (";
      print_child(f.children()[1], 2, out);
      out += " -> ";
      print_child(f.children()[0], 1, out);
      out += ")";
      return;
    }
    case Connective::Exists:
    case Connective::Forall:
      out += f.kind() == Connective::Exists ? "exists " : "forall ";
      out += f.bound_var();
      out += ". ";
      print(f.body(), out);
      return;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace atomiso
