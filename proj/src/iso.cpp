#include "atomiso/iso.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <thread>

#include "atomiso/compile.hpp"
#include "atomiso/errors.hpp"

namespace atomiso {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Found:
      return "FOUND";
    case Verdict::NotFound:
      return "NOT_FOUND";
    case Verdict::NotFoundIncomplete:
      return "NOT_FOUND_INCOMPLETE";
  }
  return "?";
}

std::string_view to_string(MorphismKind k) noexcept {
  switch (k) {
    case MorphismKind::Isomorphism:
      return "iso";
    case MorphismKind::Embedding:
      return "emb";
    case MorphismKind::Homomorphism:
      return "hom";
  }
  return "?";
}

std::string certificate_to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["mode"] = to_string(c.mode);
  j["witness"] = c.witness ? nlohmann::ordered_json(to_string(*c.witness)) : nlohmann::ordered_json(nullptr);
  j["params"] = nlohmann::ordered_json::array();
  for (const auto& p : c.params) j["params"].push_back(p.str());
  j["stats"] = {{"orbits_A", c.orbits_A}, {"orbits_B", c.orbits_B}, {"candidates", c.candidates}};
  j["caveat"] = c.caveat ? nlohmann::ordered_json(*c.caveat) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

namespace {

AtomSet with_params(const Structure& A, const Structure& B, const AtomSet& T) {
  AtomSet out = T;
  auto pa = A.params(), pb = B.params();
  out.insert(pa.begin(), pa.end());
  out.insert(pb.begin(), pb.end());
  return out;
}

AtomSet minus(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::size_t dimension_over(const Backend& b, const Expr& x, const AtomSet& T) {
  return minus(least_support(b, x).atoms, T).size();
}

Expr union_of_graphs(const std::vector<Expr>& graphs) {
  std::vector<Comp> comps;
  for (const auto& g : graphs)
    for (const auto& c : g.comps()) comps.push_back(c);
  return Expr::set(std::move(comps));
}

DefFunction function_of(const Structure& A, const Structure& B, Expr graph) {
  return DefFunction{A.universe, B.universe, std::move(graph), std::nullopt};
}

}  // namespace

OrbitPieces bijective_orbit_graphs(const Structure& A, const Structure& B, const AtomSet& T,
                                   const SearchOptions& options) {
  check_same_signature(A, B);
  const auto& b = A.atoms();
  const AtomSet TT = with_params(A, B, T);
  OrbitPieces out;
  out.orbits_A = orbit_decomposition(b, A.universe, TT);
  out.orbits_B = orbit_decomposition(b, B.universe, TT);
  std::vector<std::size_t> dim_B;
  for (const auto& o : out.orbits_B) dim_B.push_back(dimension_over(b, o.element, TT));
  const bool need_injective = options.mode != MorphismKind::Homomorphism;
  std::uint64_t examined = 0;
  for (std::size_t i = 0; i < out.orbits_A.size(); ++i) {
    const auto& x = out.orbits_A[i].element;
    AtomSet S = least_support(b, x).atoms;
    const std::size_t dim_x = minus(S, TT).size();
    S.insert(TT.begin(), TT.end());
    for (std::size_t j = 0; j < out.orbits_B.size(); ++j) {
      if (need_injective ? dim_B[j] != dim_x : dim_B[j] > dim_x) continue;
      // A function piece through x picks a point of the B-orbit fixed by the stabilizer of x.
      for (const auto& d : orbit_decomposition(b, out.orbits_B[j].expr(), S)) {
        if (++examined > options.budget)
          throw ResourceError("more than " + std::to_string(options.budget) + " candidate orbit graphs", examined);
        const auto& y = d.element;
        if (!supports(b, y, S)) continue;
        auto piece = orbit_expression(b, Expr::tuple({x, y}), TT);
        if (!graph_functional(b, piece)) continue;
        if (need_injective && !graph_injective(b, piece)) continue;
        out.pieces.push_back(OrbitGraph{i, j, std::move(piece)});
      }
    }
  }
  return out;
}

namespace {

class MatchingSearch {
 public:
  MatchingSearch(const Structure& A, const Structure& B, const OrbitPieces& op, const SearchOptions& options)
      : A_(A), B_(B), op_(op), options_(options), by_A_(op.orbits_A.size()) {
    for (std::size_t p = 0; p < op.pieces.size(); ++p) by_A_[op.pieces[p].orbit_A].push_back(p);
    order_.resize(op.orbits_A.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::vector<std::size_t> weight;
    for (const auto& o : op.orbits_A) weight.push_back(o.type.size());
    // larger types first
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t c) { return weight[a] > weight[c]; });
  }

  struct Result {
    std::optional<Expr> witness;
    std::uint64_t candidates = 0;
  };

  Result run() {
    if (options_.mode == MorphismKind::Isomorphism && op_.orbits_A.size() != op_.orbits_B.size()) return {};
    if (op_.orbits_A.empty()) {
      Result r;
      r.candidates = 1;
      if (verify(Expr::empty())) r.witness = Expr::empty();
      return r;
    }
    const auto& top = by_A_[order_[0]];
    std::vector<Result> results(top.size());
    std::vector<std::exception_ptr> errors(top.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{top.size()};
    auto worker = [&] {
      while (true) {
        std::size_t k = next.fetch_add(1);
        if (k >= top.size()) return;
        if (k > best.load()) continue;
        try {
          std::vector<std::size_t> chosen{top[k]};
          std::vector<char> used(op_.orbits_B.size(), 0);
          used[op_.pieces[top[k]].orbit_B] = 1;
          results[k].witness = descend(chosen, used, results[k].candidates, k, best);
          if (results[k].witness) {
            std::size_t cur = best.load();
            while (k < cur && !best.compare_exchange_weak(cur, k)) {
            }
          }
        } catch (...) {
          errors[k] = std::current_exception();
          std::size_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
        }
      }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(options_.threads, static_cast<unsigned>(top.size())));
    if (n == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    Result out;
    for (std::size_t k = 0; k < top.size(); ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      out.candidates += results[k].candidates;
      if (out.candidates > options_.budget)
        throw ResourceError("more than " + std::to_string(options_.budget) + " candidate morphisms", out.candidates);
      if (results[k].witness) {
        out.witness = results[k].witness;
        break;
      }
    }
    return out;
  }

 private:
  std::optional<Expr> descend(std::vector<std::size_t>& chosen, std::vector<char>& used, std::uint64_t& count,
                              std::size_t branch, const std::atomic<std::size_t>& best) {
    if (branch > best.load()) return std::nullopt;
    if (!partial_ok(chosen)) return std::nullopt;
    if (chosen.size() == order_.size()) {
      if (++count > options_.budget) return std::nullopt;
      auto g = graph(chosen);
      if (verify(g)) return g;
      return std::nullopt;
    }
    for (auto p : by_A_[order_[chosen.size()]]) {
      const auto j = op_.pieces[p].orbit_B;
      const bool distinct = options_.mode != MorphismKind::Homomorphism;
      if (distinct && used[j]) continue;
      chosen.push_back(p);
      ++used[j];
      auto r = descend(chosen, used, count, branch, best);
      --used[j];
      chosen.pop_back();
      if (r) return r;
      if (count > options_.budget) return std::nullopt;
    }
    return std::nullopt;
  }

  Expr graph(const std::vector<std::size_t>& chosen) const {
    std::vector<Expr> gs;
    for (auto p : chosen) gs.push_back(op_.pieces[p].graph);
    return union_of_graphs(gs);
  }

  bool partial_ok(const std::vector<std::size_t>& chosen) const {
    return preserves_relations(function_of(A_, B_, graph(chosen)), A_, B_, options_.mode);
  }

  bool verify(const Expr& g) const { return check_morphism(function_of(A_, B_, g), A_, B_, options_.mode); }

  const Structure& A_;
  const Structure& B_;
  const OrbitPieces& op_;
  SearchOptions options_;
  std::vector<std::vector<std::size_t>> by_A_;
  std::vector<std::size_t> order_;
};

Certificate naive_search(const Structure& A, const Structure& B, const AtomSet& TT, const SearchOptions& options) {
  const auto& b = A.atoms();
  Certificate c;
  c.mode = options.mode;
  c.params = TT;
  c.orbits_A = orbit_decomposition(b, A.universe, TT).size();
  c.orbits_B = orbit_decomposition(b, B.universe, TT).size();
  for (const auto& g : definable_subsets(b, product({A.universe, B.universe}), TT, options.budget)) {
    ++c.candidates;
    if (check_morphism(function_of(A, B, g), A, B, options.mode)) {
      c.verdict = Verdict::Found;
      c.witness = g;
      return c;
    }
  }
  return c;
}

}  // namespace

Certificate find_T_definable_iso(const Structure& A, const Structure& B, const AtomSet& T, const SearchOptions& options) {
  check_same_signature(A, B);
  const AtomSet TT = with_params(A, B, T);
  if (options.naive) return naive_search(A, B, TT, options);
  auto op = bijective_orbit_graphs(A, B, TT, options);
  MatchingSearch search(A, B, op, options);
  auto r = search.run();
  Certificate c;
  c.mode = options.mode;
  c.params = TT;
  c.orbits_A = op.orbits_A.size();
  c.orbits_B = op.orbits_B.size();
  c.candidates = r.candidates;
  if (r.witness) {
    c.verdict = Verdict::Found;
    c.witness = r.witness;
  }
  return c;
}

Certificate decide_definable_iso(const Structure& A, const Structure& B, const AtomSet& extra, const SearchOptions& options) {
  auto c = find_T_definable_iso(A, B, extra, options);
  if (c.verdict != Verdict::NotFound) return c;
  if (!A.atoms().dense()) {
    c.verdict = Verdict::NotFoundIncomplete;
    c.caveat = "the " + std::string(A.atoms().name()) +
               " atoms are not dense: no isomorphism definable over the given parameters, but one with more "
               "parameters may exist";
  } else if (options.mode != MorphismKind::Isomorphism) {
    c.verdict = Verdict::NotFoundIncomplete;
    c.caveat = "parameter elimination is only known for isomorphisms: no " + std::string(to_string(options.mode)) +
               " definable over the given parameters, but one with more parameters may exist";
  }
  return c;
}

// ---------------------------------------------------------------- smoothing

namespace {

std::optional<std::size_t> orbit_of(const Backend& b, const Expr& x, const std::vector<OrbitDescriptor>& orbits,
                                    const std::vector<std::size_t>& among) {
  for (auto i : among)
    if (is_member(b, x, orbits[i].expr())) return i;
  return std::nullopt;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

SmoothingState eliminate_parameters(const DefFunction& f, const Structure& A, const Structure& B, const AtomSet& T) {
  check_same_signature(A, B);
  const auto& b = A.atoms();
  if (!b.dense())
    throw DensenessError("parameter elimination needs dense atoms; the " + std::string(b.name()) + " atoms are not");
  if (!check_isomorphism(f, A, B)) throw ValidationError("the given function is not an isomorphism");

  SmoothingState st;
  st.T = with_params(A, B, T);
  st.S = st.T;
  st.S.insert(f.graph.params().begin(), f.graph.params().end());
  st.orbits_A = orbit_decomposition(b, A.universe, st.T);
  st.orbits_B = orbit_decomposition(b, B.universe, st.T);
  if (st.orbits_A.size() != st.orbits_B.size())
    throw InternalError("isomorphic structures with different numbers of orbits");
  st.s_orbits_B = orbit_decomposition(b, B.universe, st.S).size();
  const std::size_t m = st.orbits_A.size();

  std::vector<std::size_t> dim_A, dim_B;
  for (const auto& o : st.orbits_A) dim_A.push_back(dimension_over(b, o.element, st.T));
  for (const auto& o : st.orbits_B) dim_B.push_back(dimension_over(b, o.element, st.T));
  std::vector<char> done_A(m, 0), done_B(m, 0);
  std::vector<Expr> pieces;
  const DefFunction f_inv = inverse(f);

  auto current_h = [&] { return function_of(A, B, union_of_graphs(pieces)); };

  for (std::size_t step = 0; step < m; ++step) {
    // remaining orbit of maximal dimension, A side first
    bool swapped = false;
    std::size_t pick = m, best = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (!done_A[i] && (pick == m || dim_A[i] > best)) pick = i, best = dim_A[i];
    for (std::size_t j = 0; j < m; ++j)
      if (!done_B[j] && dim_B[j] > best) pick = j, best = dim_B[j], swapped = true;

    const auto& here = swapped ? st.orbits_B : st.orbits_A;
    const auto& there = swapped ? st.orbits_A : st.orbits_B;
    const auto& there_done = swapped ? done_A : done_B;
    const DefFunction& fwd = swapped ? f_inv : f;
    const DefFunction h = current_h();
    const DefFunction back = swapped ? h : inverse(h);

    SmoothingStep rec;
    rec.swapped = swapped;
    rec.dimension = best;
    auto rep = here[pick].element;
    auto pi = b.independent_embedding(st.S, st.T, rep.params());
    rec.start = act(pi, rep);

    std::vector<std::size_t> done_there;
    for (std::size_t j = 0; j < m; ++j)
      if (there_done[j]) done_there.push_back(j);
    std::vector<Expr> s_orbits;
    Expr x = rec.start;
    while (true) {
      Expr y = fn_apply(b, fwd, x);
      rec.trace.emplace_back(x, y);
      for (const auto& o : s_orbits)
        if (is_member(b, y, o)) throw InternalError("alternating sequence revisits an orbit");
      if (rec.trace.size() > st.s_orbits_B) throw InternalError("alternating sequence longer than the orbit count");
      if (!orbit_of(b, y, there, done_there)) break;
      s_orbits.push_back(orbit_expression(b, y, st.S));
      x = fn_apply(b, back, y);
    }
    const Expr end = rec.trace.back().second;
    auto partner = orbit_of(b, end, there, all_indices(m));
    if (!partner || there_done[*partner]) throw InternalError("sequence ended outside the remaining orbits");

    auto oriented = swapped ? Expr::tuple({end, rec.start}) : Expr::tuple({rec.start, end});
    rec.piece = orbit_expression(b, oriented, st.T);
    if (!graph_functional(b, rec.piece) || !graph_injective(b, rec.piece))
      throw InternalError("orbit of the new pair is not a bijection");
    pieces.push_back(rec.piece);
    rec.orbit_A = swapped ? *partner : pick;
    rec.orbit_B = swapped ? pick : *partner;
    done_A[rec.orbit_A] = done_B[rec.orbit_B] = 1;
    st.done_A.push_back(rec.orbit_A);
    st.done_B.push_back(rec.orbit_B);

    // h^-1 f, applied length + 1 times, returns to the start
    {
      const DefFunction h2 = current_h();
      const DefFunction back2 = swapped ? h2 : inverse(h2);
      Expr z = rec.start;
      for (std::size_t k = 0; k < rec.trace.size(); ++k) z = fn_apply(b, back2, fn_apply(b, fwd, z));
      if (!set_equal(b, z, rec.start)) throw InternalError("alternating sequence does not close up");
    }
    st.steps.push_back(std::move(rec));
  }

  st.h = checked(b, current_h());
  if (!st.h.checked->bijective() || !check_isomorphism(st.h, A, B))
    throw InternalError("the smoothed function is not an isomorphism");
  return st;
}

}  // namespace atomiso
