#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "atomiso/atom.hpp"
#include "atomiso/formula.hpp"

namespace atomiso {

using Valuation = std::map<std::string, Atom>;

/// Finite partial map on atoms, meant to be a partial automorphism.
using AtomMap = std::map<Atom, Atom>;

/// An effectively omega-categorical atom structure.
///
/// Everything the rest of the library knows about a structure of atoms goes
/// through this interface: the vocabulary, orbit representatives of one-point
/// extensions (which drive evaluation, type enumeration and witnesses),
/// complete types, quantifier elimination, and denseness witnesses.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual bool supports(Relation r) const noexcept = 0;
  virtual Atom::Kind atom_kind() const noexcept = 0;
  virtual bool dense() const noexcept = 0;

  /// One atom from each orbit of the pointwise stabilizer of `placed`
  /// (sorted, duplicate free): the placed atoms in order, then fresh atoms
  /// in a fixed tie-breaking order.
  virtual std::vector<Atom> extension_candidates(const std::vector<Atom>& placed) const = 0;

  /// Key identifying the orbit of `tuple` under automorphisms fixing `fixed`.
  virtual std::vector<int> type_key(const std::vector<Atom>& tuple, const AtomSet& fixed) const = 0;

  /// Quantifier-free formula over `terms` that holds exactly on the orbit of
  /// `values` under automorphisms fixing `fixed`.
  virtual Formula diagram(const std::vector<Term>& terms, const std::vector<Atom>& values,
                          const AtomSet& fixed) const = 0;

  /// Equivalent quantifier-free formula.
  virtual Formula qe(const Formula& f) const = 0;

  /// Partial automorphism fixing `fixed` and sending the remaining atoms of
  /// `atoms` into a denseness witness region for `independent_of`.
  virtual AtomMap independent_embedding(const AtomSet& independent_of, const AtomSet& fixed,
                                        const AtomSet& atoms) const;

  /// `n` distinct atoms inside the denseness witness region for S.
  virtual std::vector<Atom> independent_atoms(const AtomSet& S, std::size_t n) const;

  void validate(const Atom& a) const;
  void validate(const Formula& f) const;
};

/// `equality`, `dlo` or `cyclic`.
const Backend& backend(std::string_view name);

bool sat(const Backend& b, const Formula& f, const Valuation& val = {});

inline Formula qe(const Backend& b, const Formula& f) { return b.qe(f); }

/// Calls `visit` on a representative of every orbit of tuples for `vars`
/// under automorphisms fixing `fixed`, restricted to tuples satisfying all
/// `constraints` (checked as soon as their variables are placed). Stops
/// early when `visit` returns false.
void enumerate_orbits(const Backend& b, const std::vector<std::string>& vars, const AtomSet& fixed,
                      const std::vector<Formula>& constraints,
                      const std::function<bool(const std::vector<Atom>&)>& visit);

struct CompleteType {
  Formula formula;
  std::vector<Atom> rep;
};

std::vector<CompleteType> complete_types(const Backend& b, const std::vector<std::string>& vars, const AtomSet& S);

std::uint64_t rn_count(const Backend& b, std::size_t n);

/// Deterministic satisfying valuation for the listed variables, if any.
std::optional<Valuation> find_witness(const Backend& b, const Formula& f, const std::vector<std::string>& vars);
/// Same, over the formula's free variables in name order.
std::optional<Valuation> find_witness(const Backend& b, const Formula& f);

bool is_partial_automorphism(const Backend& b, const AtomMap& m);

/// Extends `m` to cover `more`; never fails on a partial automorphism.
AtomMap extend_map(const Backend& b, AtomMap m, const AtomSet& more);

}  // namespace atomiso
