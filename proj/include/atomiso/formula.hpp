#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "atomiso/atom.hpp"

namespace atomiso {

/// A first-order term: a variable or an atom constant (parameter).
class Term {
 public:
  static Term var(std::string name) { return Term(std::move(name)); }
  static Term constant(Atom a) { return Term(a); }

  bool is_var() const noexcept { return std::holds_alternative<std::string>(value_); }
  const std::string& name() const { return std::get<std::string>(value_); }
  const Atom& atom() const { return std::get<Atom>(value_); }

  std::string str() const { return is_var() ? name() : atom().str(); }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  explicit Term(std::string n) : value_(std::move(n)) {}
  explicit Term(Atom a) : value_(a) {}

  std::variant<std::string, Atom> value_;
};

enum class Relation : std::uint8_t { Eq, Lt, Le, Cyclic };
enum class Connective : std::uint8_t { True, False, Rel, Not, And, Or, Implies, Iff, Exists, Forall };

std::size_t arity(Relation r) noexcept;

/// Immutable first-order formula over the atom vocabulary. Cheap to copy.
class Formula {
 public:
  Formula();

  Connective kind() const noexcept;
  Relation relation() const;
  const std::vector<Term>& args() const;
  const std::vector<Formula>& children() const;
  const std::string& bound_var() const;
  const Formula& body() const;

  bool is_true() const noexcept { return kind() == Connective::True; }
  bool is_false() const noexcept { return kind() == Connective::False; }
  bool is_quantifier_free() const noexcept;

  /// Sorted, deduplicated free variable names.
  const std::vector<std::string>& free_vars() const noexcept;
  bool has_free(std::string_view var) const noexcept;

  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);

  // Raw construction; prefer the folding helpers below.
  static Formula make_rel(Relation r, std::vector<Term> args);
  static Formula make(Connective c, std::vector<Formula> kids);
  static Formula make_quant(Connective c, std::string var, Formula body);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Folding constructors: constant subformulas and trivially decided literals
// collapse; And/Or flatten and deduplicate.
Formula truth();
Formula falsity();
Formula boolean(bool b);
Formula rel(Relation r, std::vector<Term> args);
Formula eq(const Term& a, const Term& b);
Formula neq(const Term& a, const Term& b);
Formula lt(const Term& a, const Term& b);
Formula le(const Term& a, const Term& b);
Formula cyc(const Term& a, const Term& b, const Term& c);
Formula neg(const Formula& f);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula conj(const Formula& a, const Formula& b);
Formula disj(const Formula& a, const Formula& b);
Formula implies(const Formula& a, const Formula& b);
Formula iff(const Formula& a, const Formula& b);
Formula exists(const std::string& var, const Formula& body);
Formula forall(const std::string& var, const Formula& body);

/// exists vars. (c1 and ... and cn), with each conjunct placed directly under
/// the innermost quantifier it needs and one-point equalities substituted away.
Formula exists_block(const std::vector<std::string>& vars, std::vector<Formula> conjuncts);
/// forall vars. (h1 and ... and hn -> conclusion), scoped the same way.
Formula forall_block(const std::vector<std::string>& vars, std::vector<Formula> hypotheses,
                     const Formula& conclusion);

/// Flattened top-level conjuncts (a non-conjunction yields itself).
std::vector<Formula> conjuncts(const Formula& f);

/// Truth of a relation on concrete atoms (shared by every backend).
bool holds(Relation r, const std::vector<Atom>& args);

AtomSet constants(const Formula& f);
void collect_constants(const Formula& f, AtomSet& out);
void collect_bound_vars(const Formula& f, std::set<std::string>& out);

/// Capture-avoiding simultaneous substitution of free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& subst);
/// Replaces atom constants through the map; constants outside it are kept.
Formula rename_constants(const Formula& f, const std::map<Atom, Atom>& map);
/// Replaces atom constants by terms. Variables introduced must not be bound in f.
Formula replace_constants(const Formula& f, const std::map<Atom, Term>& map);

/// Globally unique variable name; never produced by the parser.
std::string fresh_var(std::string_view hint = "v");

std::string to_string(const Formula& f);

}  // namespace atomiso
