#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atomiso/sets.hpp"
#include "atomiso/structure.hpp"

namespace atomiso {

/// One T-orbit of A x B that is the graph of a bijection (or, for
/// homomorphisms, a function) between a T-orbit of A and a T-orbit of B.
struct OrbitGraph {
  std::size_t orbit_A = 0;
  std::size_t orbit_B = 0;
  Expr graph = Expr::empty();
};

struct SearchOptions {
  MorphismKind mode = MorphismKind::Isomorphism;
  unsigned threads = 1;
  /// Limit on candidate pieces and on complete candidates examined.
  std::uint64_t budget = std::uint64_t{1} << 20;
  /// Enumerate every union of T-orbits of A x B instead of matching.
  bool naive = false;
};

enum class Verdict : std::uint8_t { Found, NotFound, NotFoundIncomplete };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(MorphismKind k) noexcept;

struct Certificate {
  Verdict verdict = Verdict::NotFound;
  MorphismKind mode = MorphismKind::Isomorphism;
  std::optional<Expr> witness;
  AtomSet params;
  std::size_t orbits_A = 0;
  std::size_t orbits_B = 0;
  std::uint64_t candidates = 0;
  std::optional<std::string> caveat;
};

std::string certificate_to_json(const Certificate& c);

struct OrbitPieces {
  std::vector<OrbitDescriptor> orbits_A;
  std::vector<OrbitDescriptor> orbits_B;
  std::vector<OrbitGraph> pieces;
};

/// T-orbits of A and B and every T-orbit of A x B that can be a piece of a
/// T-definable morphism of the given kind.
OrbitPieces bijective_orbit_graphs(const Structure& A, const Structure& B, const AtomSet& T,
                                   const SearchOptions& options = {});

/// Search for a T-definable morphism A -> B. T is widened to cover the
/// parameters of both structures.
Certificate find_T_definable_iso(const Structure& A, const Structure& B, const AtomSet& T,
                                 const SearchOptions& options = {});

/// Runs the search with T = params(A) + params(B) + extra. A negative answer
/// is conclusive only for isomorphisms over dense backends.
Certificate decide_definable_iso(const Structure& A, const Structure& B, const AtomSet& extra = {},
                                 const SearchOptions& options = {});

struct SmoothingStep {
  /// The orbit was chosen on the B side and the roles of A and B swapped.
  bool swapped = false;
  std::size_t orbit_A = 0;
  std::size_t orbit_B = 0;
  std::size_t dimension = 0;
  Expr start = Expr::empty();
  /// (x_i, y_i) with y_i = f(x_i) and x_{i+1} = h^-1(y_i).
  std::vector<std::pair<Expr, Expr>> trace;
  Expr piece = Expr::empty();
};

struct SmoothingState {
  AtomSet S;
  AtomSet T;
  std::vector<OrbitDescriptor> orbits_A;
  std::vector<OrbitDescriptor> orbits_B;
  std::vector<std::size_t> done_A;
  std::vector<std::size_t> done_B;
  std::size_t s_orbits_B = 0;
  std::vector<SmoothingStep> steps;
  DefFunction h;

  /// Step at which the orbit was processed and the length of its sequence.
  std::size_t order(std::size_t step) const { return step; }
  std::size_t length(std::size_t step) const { return steps.at(step).trace.size() - 1; }
};

/// Turns an isomorphism f: A -> B with parameters into a T-definable one.
SmoothingState eliminate_parameters(const DefFunction& f, const Structure& A, const Structure& B,
                                    const AtomSet& T = {});

}  // namespace atomiso
