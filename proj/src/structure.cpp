#include "atomiso/structure.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "atomiso/compile.hpp"
#include "atomiso/errors.hpp"

namespace atomiso {

using nlohmann::json;

AtomSet Structure::params() const {
  AtomSet out = universe.params();
  auto add = [&](const Expr& e) { out.insert(e.params().begin(), e.params().end()); };
  for (const auto& [_, e] : interp) add(e);
  for (const auto& [_, e] : family_interp) add(e);
  for (const auto& f : signature.families) add(f.index);
  return out;
}

Expr product(const std::vector<Expr>& factors) {
  std::vector<std::vector<Comp>> cs;
  std::set<std::string> avoid;
  for (const auto& f : factors) {
    if (!f.is_set()) throw DomainError("product of a non-set " + to_string(f));
    cs.push_back(clauses(f));
    auto n = names_in(f);
    avoid.insert(n.begin(), n.end());
  }
  std::vector<Comp> out;
  std::vector<std::size_t> pick(factors.size(), 0);
  for (const auto& c : cs)
    if (c.empty()) return Expr::empty();
  while (true) {
    std::vector<Expr> elements;
    std::vector<std::string> binders;
    std::vector<Formula> guards;
    std::size_t total = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) total += cs[i][pick[i]].binders.size();
    auto names = clean_names(total, avoid);
    std::size_t next = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& c = cs[i][pick[i]];
      std::map<std::string, Term> ren;
      for (const auto& b : c.binders) {
        ren.emplace(b, Term::var(names[next]));
        binders.push_back(names[next++]);
      }
      elements.push_back(substitute(c.element, ren));
      guards.push_back(substitute(c.guard, ren));
    }
    out.push_back(Comp{Expr::tuple(std::move(elements)), std::move(binders), conj(std::move(guards))});
    std::size_t i = 0;
    for (; i < factors.size(); ++i) {
      if (++pick[i] < cs[i].size()) break;
      pick[i] = 0;
    }
    if (i == factors.size()) break;
  }
  return Expr::set(std::move(out));
}

Expr power(const Expr& X, std::size_t r) {
  if (r == 1) return X;
  return product(std::vector<Expr>(r, X));
}

namespace {

const Backend& backend_checked(const std::string& name) {
  try {
    return backend(name);
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

void check_arity(const std::string& what, std::size_t arity) {
  if (arity < 1 || arity > kMaxArity)
    throw ValidationError(what + " has arity " + std::to_string(arity) + ", expected 1.." + std::to_string(kMaxArity));
}

void check_closed(const std::string& what, const Expr& e) {
  if (!e.free_vars().empty()) throw ValidationError(what + " has free variable " + e.free_vars().front());
  if (!e.is_set()) throw ValidationError(what + " is not a set");
}

}  // namespace

void validate_structure(const Structure& s) {
  const auto& b = backend_checked(s.backend_name);
  check_closed("universe", s.universe);
  validate(s.universe, b);
  std::set<std::string> names;
  for (const auto& r : s.signature.relations) {
    if (!names.insert(r.name).second) throw ValidationError("symbol " + r.name + " declared twice");
    check_arity("relation " + r.name, r.arity);
    auto it = s.interp.find(r.name);
    if (it == s.interp.end()) throw ValidationError("relation " + r.name + " has no interpretation");
    check_closed("relation " + r.name, it->second);
    validate(it->second, b);
    if (!is_subset(b, it->second, power(s.universe, r.arity)))
      throw ValidationError("relation " + r.name + " is not contained in the universe power " + std::to_string(r.arity));
  }
  for (const auto& f : s.signature.families) {
    if (!names.insert(f.name).second) throw ValidationError("symbol " + f.name + " declared twice");
    check_arity("family " + f.name, f.arity);
    check_closed("index of family " + f.name, f.index);
    validate(f.index, b);
    auto it = s.family_interp.find(f.name);
    if (it == s.family_interp.end()) throw ValidationError("family " + f.name + " has no interpretation");
    check_closed("family " + f.name, it->second);
    validate(it->second, b);
    if (!is_subset(b, it->second, product({f.index, power(s.universe, f.arity)})))
      throw ValidationError("family " + f.name + " is not contained in index x universe power " + std::to_string(f.arity));
  }
  for (const auto& [name, _] : s.interp)
    if (!names.count(name)) throw ValidationError("interpretation of undeclared relation " + name);
  for (const auto& [name, _] : s.family_interp)
    if (!names.count(name)) throw ValidationError("interpretation of undeclared family " + name);
}

void check_same_signature(const Structure& A, const Structure& B) {
  if (A.backend_name != B.backend_name)
    throw SignatureError("backends differ: " + A.backend_name + " and " + B.backend_name);
  auto rels = [](const Structure& s) {
    std::map<std::string, std::size_t> m;
    for (const auto& r : s.signature.relations) m.emplace(r.name, r.arity);
    return m;
  };
  if (rels(A) != rels(B)) throw SignatureError("relation symbols or arities differ");
  if (A.signature.families.size() != B.signature.families.size()) throw SignatureError("families differ");
  for (const auto& fa : A.signature.families) {
    auto it = std::find_if(B.signature.families.begin(), B.signature.families.end(),
                           [&](const FamilySymbol& fb) { return fb.name == fa.name; });
    if (it == B.signature.families.end() || it->arity != fa.arity)
      throw SignatureError("family " + fa.name + " differs");
    if (!set_equal(A.atoms(), fa.index, it->index)) throw SignatureError("index sets of family " + fa.name + " differ");
  }
}

// ---------------------------------------------------------------- JSON

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field \"" + key + "\" has the wrong type");
  }
}

Expr expr_field(const json& j, const char* key, const std::string& where, const Backend& b) {
  return parse_expr(field<std::string>(j, key, where), b);
}

}  // namespace

Structure parse_structure(std::string_view json_text) {
  auto j = parse_json(json_text);
  Structure s;
  s.backend_name = field<std::string>(j, "backend", "structure");
  const auto& b = backend_checked(s.backend_name);
  s.name = j.contains("name") ? field<std::string>(j, "name", "structure") : "";
  s.universe = expr_field(j, "universe", "structure", b);
  if (j.contains("relations")) {
    for (const auto& r : j.at("relations")) {
      auto name = field<std::string>(r, "name", "relation");
      auto arity = field<std::size_t>(r, "arity", "relation " + name);
      s.signature.relations.push_back(RelationSymbol{name, arity});
      s.interp.insert_or_assign(name, expr_field(r, "interp", "relation " + name, b));
    }
  }
  if (j.contains("families")) {
    for (const auto& f : j.at("families")) {
      auto name = field<std::string>(f, "name", "family");
      auto arity = field<std::size_t>(f, "arity", "family " + name);
      s.signature.families.push_back(FamilySymbol{name, arity, expr_field(f, "index", "family " + name, b)});
      s.family_interp.insert_or_assign(name, expr_field(f, "interp", "family " + name, b));
    }
  }
  validate_structure(s);
  return s;
}

Structure load_structure(const std::filesystem::path& file) { return parse_structure(read_file(file)); }

std::string structure_to_json(const Structure& s) {
  json j;
  j["backend"] = s.backend_name;
  j["name"] = s.name;
  j["universe"] = to_string(s.universe);
  j["relations"] = json::array();
  for (const auto& r : s.signature.relations)
    j["relations"].push_back({{"name", r.name}, {"arity", r.arity}, {"interp", to_string(s.interp.at(r.name))}});
  j["families"] = json::array();
  for (const auto& f : s.signature.families)
    j["families"].push_back({{"name", f.name},
                             {"arity", f.arity},
                             {"index", to_string(f.index)},
                             {"interp", to_string(s.family_interp.at(f.name))}});
  return j.dump(2) + "\n";
}

FunctionFile parse_function(std::string_view json_text) {
  auto j = parse_json(json_text);
  FunctionFile out;
  out.backend_name = field<std::string>(j, "backend", "function");
  const auto& b = backend_checked(out.backend_name);
  out.function = make_function(expr_field(j, "dom", "function", b), expr_field(j, "cod", "function", b),
                               expr_field(j, "graph", "function", b));
  for (const auto* e : {&out.function.dom, &out.function.cod, &out.function.graph})
    if (!e->free_vars().empty()) throw ValidationError("function has free variable " + e->free_vars().front());
  return out;
}

FunctionFile load_function(const std::filesystem::path& file) { return parse_function(read_file(file)); }

std::string function_to_json(const std::string& backend_name, const DefFunction& f) {
  json j{{"backend", backend_name}, {"dom", to_string(f.dom)}, {"cod", to_string(f.cod)}, {"graph", to_string(f.graph)}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- morphisms

namespace {

Formula relate(const Formula& a, const Formula& b, MorphismKind kind) {
  return kind == MorphismKind::Homomorphism ? implies(a, b) : iff(a, b);
}

Expr row(const std::vector<Expr>& xs) { return xs.size() == 1 ? xs.front() : Expr::tuple(xs); }

// forall p1..pr in G: body(first components, second components)
Formula over_graph(const Expr& G, std::size_t r, std::vector<Expr>& xs, std::vector<Expr>& ys,
                   const std::function<Formula(const std::vector<Expr>&, const std::vector<Expr>&)>& body) {
  if (xs.size() == r) return body(xs, ys);
  return forall_in(G, [&](const Expr& p) {
    xs.push_back(first(p));
    ys.push_back(second(p));
    auto f = over_graph(G, r, xs, ys, body);
    xs.pop_back();
    ys.pop_back();
    return f;
  });
}

}  // namespace

bool preserves_relations(const DefFunction& f, const Structure& A, const Structure& B, MorphismKind kind) {
  check_same_signature(A, B);
  const auto& b = A.atoms();
  for (const auto& r : A.signature.relations) {
    const auto& IA = A.interp.at(r.name);
    const auto& IB = B.interp.at(r.name);
    std::vector<Expr> xs, ys;
    auto sentence = over_graph(f.graph, r.arity, xs, ys, [&](const std::vector<Expr>& a, const std::vector<Expr>& c) {
      return relate(member_formula(row(a), IA), member_formula(row(c), IB), kind);
    });
    if (!sat(b, sentence)) return false;
  }
  for (const auto& fam : A.signature.families) {
    const auto& IA = A.family_interp.at(fam.name);
    const auto& IB = B.family_interp.at(fam.name);
    auto sentence = forall_in(fam.index, [&](const Expr& i) {
      std::vector<Expr> xs, ys;
      return over_graph(f.graph, fam.arity, xs, ys, [&](const std::vector<Expr>& a, const std::vector<Expr>& c) {
        return relate(member_formula(Expr::tuple({i, row(a)}), IA), member_formula(Expr::tuple({i, row(c)}), IB), kind);
      });
    });
    if (!sat(b, sentence)) return false;
  }
  return true;
}

bool check_morphism(const DefFunction& f, const Structure& A, const Structure& B, MorphismKind kind) {
  check_same_signature(A, B);
  const auto& b = A.atoms();
  if (!set_equal(b, f.dom, A.universe) || !set_equal(b, f.cod, B.universe)) return false;
  auto flags = f.checked ? *f.checked : fn_check(b, f);
  if (!flags.contained || !flags.functional || !flags.total) return false;
  if (kind != MorphismKind::Homomorphism && !flags.injective) return false;
  if (kind == MorphismKind::Isomorphism && !flags.surjective) return false;
  return preserves_relations(f, A, B, kind);
}

bool check_isomorphism(const DefFunction& f, const Structure& A, const Structure& B) {
  return check_morphism(f, A, B, MorphismKind::Isomorphism);
}

}  // namespace atomiso
