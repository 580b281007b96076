#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "atomiso/atom.hpp"
#include "atomiso/backend.hpp"
#include "atomiso/formula.hpp"

namespace atomiso {

struct Comp;

/// Set-builder expression: an atom, a bound variable, the set of all atoms,
/// a tuple, or a finite union of comprehensions. Immutable, cheap to copy.
class Expr {
 public:
  enum class Kind : std::uint8_t { Atom, Var, Atoms, Tuple, Union };

  static Expr atom(Atom a);
  static Expr var(std::string name);
  static Expr atoms();
  static Expr tuple(std::vector<Expr> items);
  /// Union of the given comprehensions. Clauses with a false guard are
  /// dropped, unused binders removed, and the clauses sorted and deduplicated.
  static Expr set(std::vector<Comp> comps);
  /// Same, keeping the clauses exactly as given.
  static Expr raw_set(std::vector<Comp> comps);
  static Expr empty();
  static Expr comp(Expr element, std::vector<std::string> binders, Formula guard);
  /// Finite set literal {e1, ..., ek}.
  static Expr enumerate(std::vector<Expr> elements);
  static Expr term(const Term& t);

  Kind kind() const noexcept;
  const Atom& atom_value() const;
  const std::string& var_name() const;
  const std::vector<Expr>& items() const;
  const std::vector<Comp>& comps() const;

  bool is_atomic() const noexcept { return kind() == Kind::Atom || kind() == Kind::Var; }
  bool is_set() const noexcept { return kind() == Kind::Atoms || kind() == Kind::Union; }
  Term as_term() const;

  /// Sorted free variable names.
  const std::vector<std::string>& free_vars() const noexcept;
  /// Atom parameters occurring anywhere, guards included.
  const AtomSet& params() const noexcept;
  std::size_t hash() const noexcept;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// { element | binders in atoms, guard }
struct Comp {
  Expr element;
  std::vector<std::string> binders;
  Formula guard;

  friend bool operator==(const Comp& a, const Comp& b) {
    return a.binders == b.binders && a.guard == b.guard && a.element == b.element;
  }
};

/// Canonical text; parse(to_string(e)) == e for every parsed e.
std::string to_string(const Expr& e);
std::string to_string(const Comp& c);

/// Clauses of a set expression; `atoms` yields {a | a in atoms}.
std::vector<Comp> clauses(const Expr& e);

/// Capture-avoiding substitution of free variables.
Expr substitute(const Expr& e, const std::map<std::string, Term>& subst);
Expr substitute(const Expr& e, const Valuation& val);
/// Replaces atom parameters through the map; others are kept.
Expr rename_params(const Expr& e, const AtomMap& map);
/// Replaces atom parameters by variables.
Expr abstract_params(const Expr& e, const std::map<Atom, std::string>& names);
/// Acts on e by a finite partial automorphism covering params(e).
Expr act(const AtomMap& pi, const Expr& e);
/// Renames the binders of c to fresh variables.
Comp open_clause(const Comp& c);

/// Every identifier occurring in e, bound or free (including guard variables).
std::set<std::string> names_in(const Expr& e);

/// Atomic leaves of a tuple tree, or nothing if some leaf is a set.
std::optional<std::vector<Expr>> atomic_leaves(const Expr& e);

/// Parses a closed expression and validates it against the backend.
Expr parse_expr(std::string_view text, const Backend& b);
/// Parses a formula; free variables are allowed.
Formula parse_formula(std::string_view text, const Backend& b);

/// Checks atom kinds and guard relations against the backend.
void validate(const Expr& e, const Backend& b);

}  // namespace atomiso

template <>
struct std::hash<atomiso::Expr> {
  std::size_t operator()(const atomiso::Expr& e) const noexcept { return e.hash(); }
};
