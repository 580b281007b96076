#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "atomiso/backend.hpp"
#include "atomiso/expr.hpp"
#include "atomiso/sets.hpp"

namespace atomiso {

inline constexpr std::size_t kMaxArity = 8;

struct RelationSymbol {
  std::string name;
  std::size_t arity = 1;
};

/// A definable family of relation symbols {F_i | i in index}, all of one arity.
struct FamilySymbol {
  std::string name;
  std::size_t arity = 1;
  Expr index = Expr::empty();
};

struct Signature {
  std::vector<RelationSymbol> relations;
  std::vector<FamilySymbol> families;
};

/// A definable relational structure. A unary relation is a subset of the
/// universe, an r-ary one a set of r-tuples. A family's interpretation is a set
/// of pairs (index, tuple).
struct Structure {
  std::string name;
  std::string backend_name = "equality";
  Expr universe = Expr::empty();
  Signature signature;
  std::map<std::string, Expr> interp;
  std::map<std::string, Expr> family_interp;

  const Backend& atoms() const { return backend(backend_name); }
  /// Parameters of every component expression.
  AtomSet params() const;
};

/// Cartesian product X1 x ... x Xn as one set expression (tuples of the factors).
Expr product(const std::vector<Expr>& factors);
/// X^r; X itself for r = 1.
Expr power(const Expr& X, std::size_t r);

/// Arity and containment checks. Throws ValidationError naming the symbol.
void validate_structure(const Structure& s);

/// Throws SignatureError unless A and B have the same symbols, arities and
/// (set-equal) family indices.
void check_same_signature(const Structure& A, const Structure& B);

Structure parse_structure(std::string_view json_text);
Structure load_structure(const std::filesystem::path& file);
std::string structure_to_json(const Structure& s);

struct FunctionFile {
  std::string backend_name;
  DefFunction function;
};
FunctionFile parse_function(std::string_view json_text);
FunctionFile load_function(const std::filesystem::path& file);
std::string function_to_json(const std::string& backend_name, const DefFunction& f);

enum class MorphismKind : std::uint8_t { Isomorphism, Embedding, Homomorphism };

/// Whether the relations are preserved (homomorphism) or preserved and
/// reflected (embedding, isomorphism) along the graph of f. Does not check
/// that f is a function; see fn_check.
bool preserves_relations(const DefFunction& f, const Structure& A, const Structure& B, MorphismKind kind);

/// f is a bijection A -> B that preserves and reflects every relation.
bool check_isomorphism(const DefFunction& f, const Structure& A, const Structure& B);

/// Same for the weaker notions: total functional graph, plus injective for embeddings.
bool check_morphism(const DefFunction& f, const Structure& A, const Structure& B, MorphismKind kind);

}  // namespace atomiso
