#include "atomiso/compile.hpp"

namespace atomiso {

Formula forall_in(const Expr& X, const std::function<Formula(const Expr&)>& body) {
  std::vector<Formula> parts;
  for (const auto& c : clauses(X)) {
    auto oc = open_clause(c);
    parts.push_back(forall_block(oc.binders, conjuncts(oc.guard), body(oc.element)));
    if (parts.back().is_false()) return falsity();
  }
  return conj(std::move(parts));
}

Formula forall_in(const Expr& X, const std::function<Formula(const Expr&)>& hyp,
                  const std::function<Formula(const Expr&)>& concl) {
  std::vector<Formula> parts;
  for (const auto& c : clauses(X)) {
    auto oc = open_clause(c);
    auto hs = conjuncts(oc.guard);
    for (const auto& h : conjuncts(hyp(oc.element))) hs.push_back(h);
    parts.push_back(forall_block(oc.binders, std::move(hs), concl(oc.element)));
    if (parts.back().is_false()) return falsity();
  }
  return conj(std::move(parts));
}

Formula exists_in(const Expr& X, const std::function<Formula(const Expr&)>& body) {
  std::vector<Formula> parts;
  for (const auto& c : clauses(X)) {
    auto oc = open_clause(c);
    auto cs = conjuncts(oc.guard);
    cs.push_back(body(oc.element));
    parts.push_back(exists_block(oc.binders, std::move(cs)));
    if (parts.back().is_true()) return truth();
  }
  return disj(std::move(parts));
}

Formula member_formula(const Expr& x, const Expr& Y) {
  if (Y.kind() == Expr::Kind::Atoms) return boolean(x.is_atomic());
  return exists_in(Y, [&](const Expr& z) { return equality_formula(x, z); });
}

Formula subset_formula(const Expr& X, const Expr& Y) {
  if (X == Y) return truth();
  return forall_in(X, [&](const Expr& z) { return member_formula(z, Y); });
}

Formula equality_formula(const Expr& x, const Expr& y) {
  if (x == y) return truth();
  if (x.is_atomic() && y.is_atomic()) return eq(x.as_term(), y.as_term());
  if (x.is_atomic() || y.is_atomic()) return falsity();
  const bool xt = x.kind() == Expr::Kind::Tuple;
  const bool yt = y.kind() == Expr::Kind::Tuple;
  if (xt != yt) return falsity();
  if (xt) {
    if (x.items().size() != y.items().size()) return falsity();
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < x.items().size(); ++i) {
      parts.push_back(equality_formula(x.items()[i], y.items()[i]));
      if (parts.back().is_false()) return falsity();
    }
    return conj(std::move(parts));
  }
  auto there = subset_formula(x, y);
  if (there.is_false()) return falsity();
  return conj(there, subset_formula(y, x));
}

}  // namespace atomiso
