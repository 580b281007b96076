#pragma once

#include <cstdint>
#include <vector>

#include "atomiso/backend.hpp"
#include "atomiso/expr.hpp"

namespace atomiso {

bool set_equal(const Backend& b, const Expr& x, const Expr& y);
bool is_member(const Backend& b, const Expr& x, const Expr& Y);
bool is_subset(const Backend& b, const Expr& X, const Expr& Y);

/// One S-orbit of a definable set: the elements of `clause` whose binders
/// realise the complete type `type` over S.
struct OrbitDescriptor {
  std::size_t clause_index = 0;
  Comp clause;
  Formula type;
  AtomSet S;
  Valuation rep;
  /// The clause element at `rep`, a concrete member of the orbit.
  Expr element;

  Expr expr() const;
};

/// Partition of X into S-orbits; S must contain params(X).
std::vector<OrbitDescriptor> orbit_decomposition(const Backend& b, const Expr& X, const AtomSet& S);

/// Union of the selected orbits (bit i of mask selects orbits[i]).
Expr union_of(const std::vector<OrbitDescriptor>& orbits, std::uint64_t mask);

/// S-definable expression for the S-orbit of x.
Expr orbit_expression(const Backend& b, const Expr& x, const AtomSet& S);

struct Support {
  AtomSet atoms;
  std::size_t dimension() const noexcept { return atoms.size(); }
};

/// Whether every S-automorphism fixes x.
bool supports(const Backend& b, const Expr& x, const AtomSet& S);
Support least_support(const Backend& b, const Expr& x);

inline constexpr std::uint64_t kDefaultSubsetBudget = std::uint64_t{1} << 16;

/// All T-definable subsets of X, as unions of its T-orbits in mask order.
std::vector<Expr> definable_subsets(const Backend& b, const Expr& X, const AtomSet& T,
                                    std::uint64_t budget = kDefaultSubsetBudget);

struct FunctionFlags {
  bool contained = false;
  bool functional = false;
  bool total = false;
  bool injective = false;
  bool surjective = false;

  bool bijective() const noexcept { return contained && functional && total && injective && surjective; }
};

/// A definable function given by its graph, a set of pairs.
struct DefFunction {
  Expr dom = Expr::empty();
  Expr cod = Expr::empty();
  Expr graph = Expr::empty();
  std::optional<FunctionFlags> checked;
};

/// Validates the shape of the graph (every clause element is a pair).
DefFunction make_function(Expr dom, Expr cod, Expr graph);

/// Pairs with equal first components have equal second components.
bool graph_functional(const Backend& b, const Expr& G);
/// Pairs with equal second components have equal first components.
bool graph_injective(const Backend& b, const Expr& G);

FunctionFlags fn_check(const Backend& b, const DefFunction& f);
/// f with `checked` filled in.
DefFunction checked(const Backend& b, DefFunction f);

/// f(x) for x in the domain of a functional, total f.
Expr fn_apply(const Backend& b, const DefFunction& f, const Expr& x);

/// x lies in the image of the graph's first components.
bool in_domain_of(const Backend& b, const DefFunction& f, const Expr& x);

DefFunction inverse(const DefFunction& f);

/// Pairs of the graph: (first, second) of an opened clause element.
const Expr& first(const Expr& pair);
const Expr& second(const Expr& pair);

/// `n` variable names, each a letter optionally followed by digits, not in `avoid`.
std::vector<std::string> clean_names(std::size_t n, const std::set<std::string>& avoid);

}  // namespace atomiso
