#pragma once

#include <functional>

#include "atomiso/expr.hpp"
#include "atomiso/formula.hpp"

namespace atomiso {

/// First-order formula, free in the free variables of x and y, that holds
/// exactly when x and y denote the same value.
Formula equality_formula(const Expr& x, const Expr& y);

/// x is an element of the set Y.
Formula member_formula(const Expr& x, const Expr& Y);

/// Every element of X is an element of Y.
Formula subset_formula(const Expr& X, const Expr& Y);

/// forall z in X. body(z), with z ranging over the clause elements of X.
Formula forall_in(const Expr& X, const std::function<Formula(const Expr&)>& body);

/// forall z in X. (hyp(z) -> concl(z)), with hyp's conjuncts scoped like the guard.
Formula forall_in(const Expr& X, const std::function<Formula(const Expr&)>& hyp,
                  const std::function<Formula(const Expr&)>& concl);

/// exists z in X. body(z).
Formula exists_in(const Expr& X, const std::function<Formula(const Expr&)>& body);

}  // namespace atomiso
