#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsat/error.hpp"
#include "rsat/formula.hpp"
#include "rsat/solver.hpp"

namespace rsat {

/// Chain w^f_0, w^t_1, w^f_1, ..., w^t_ell, w^f_ell, w^t_{ell+1} where each
/// "w^f_i or w^t_{i+1}" is a clause of the formula. Every unsatisfiable
/// 2-rSAT formula (with distinct variables per clause) contains one, but
/// satisfiable formulas may contain one as well.
struct Bicycle {
  std::uint32_t ell = 0;
  std::vector<Literal> literals;          // 2*ell + 2 entries
  std::uint32_t i0 = 0;                   // in 2..ell
  std::uint32_t i1 = 0;                   // in 1..ell-1
  std::vector<std::size_t> clause_indices; // ell + 1 entries, 0-based

  const Literal &wf(std::uint32_t i) const { return literals.at(2 * i); }
  const Literal &wt(std::uint32_t i) const { return literals.at(2 * i - 1); }

  friend bool operator==(const Bicycle &, const Bicycle &) = default;
};

/// ell-snake: distinct variables b_1..b_ell (b_0 = b_{ell/2} = b_{ell+1})
/// and clauses i = 0..ell of the form (b_i, rho_i, a_i) or
/// (b_{i+1}, rho'_{i+1}, a'_{i+1}). Its presence proves unsatisfiability.
struct Snake {
  struct Link {
    std::size_t clause = 0; // 0-based clause index
    Literal left;           // (b_i, rho_i, a_i)
    Literal right;          // (b_{i+1}, rho'_{i+1}, a'_{i+1})

    friend bool operator==(const Link &, const Link &) = default;
  };

  std::uint32_t ell = 0;
  std::vector<std::uint32_t> b; // b_1..b_ell at positions 0..ell-1
  std::vector<Link> links;      // i = 0..ell

  /// b_i with the boundary identifications applied.
  std::uint32_t var(std::uint32_t i) const {
    if (i == 0 || i == ell + 1)
      return b.at(ell / 2 - 1);
    return b.at(i - 1);
  }

  friend bool operator==(const Snake &, const Snake &) = default;
};

enum class SearchStatus { Found, None, BudgetExhausted };

template <typename Certificate>
struct SearchResult {
  SearchStatus status = SearchStatus::None;
  std::optional<Certificate> certificate;
};

namespace detail {

inline void require_arity_two(const Formula &f) {
  if (f.k() != 2)
    throw Error(ErrorCode::WrongArity, "certificates are defined for k = 2");
}

inline bool clause_is(const Clause &c, const Literal &x, const Literal &y) {
  const auto &l = c.literals;
  return (l[0] == x && l[1] == y) || (l[0] == y && l[1] == x);
}

inline void check_clause_index(const Formula &f, std::size_t idx) {
  if (idx >= f.m())
    throw Error(ErrorCode::IndexOutOfRange,
                "clause index " + std::to_string(idx) + " >= m = " + std::to_string(f.m()));
}

/// Literal occurrence = (clause, position in clause).
struct Occurrence {
  std::uint32_t clause;
  std::uint32_t pos;
};

inline std::vector<std::vector<Occurrence>> occurrences_by_variable(const Formula &f) {
  std::vector<std::vector<Occurrence>> occ(f.n());
  for (std::uint32_t c = 0; c < f.m(); ++c)
    for (std::uint32_t p = 0; p < 2; ++p)
      occ[f.clause(c).literals[p].variable - 1].push_back({c, p});
  return occ;
}

} // namespace detail

/// Checks (bc1)-(bc5) literally against f.
inline bool verify_bicycle(const Formula &f, const Bicycle &c) {
  detail::require_arity_two(f);
  const std::uint32_t ell = c.ell;
  if (ell < 2 || c.literals.size() != 2 * ell + 2 || c.clause_indices.size() != ell + 1)
    return false;
  for (auto idx : c.clause_indices)
    detail::check_clause_index(f, idx);
  if (c.i0 < 2 || c.i0 > ell || c.i1 < 1 || c.i1 > ell - 1)
    return false;

  // bc1
  for (std::uint32_t i = 1; i <= ell; ++i)
    for (std::uint32_t j = 1; j < i; ++j)
      if (c.wt(i).variable == c.wt(j).variable)
        return false;
  // bc2, bc5
  for (std::uint32_t i = 1; i <= ell; ++i)
    if (c.wt(i).variable != c.wf(i).variable || !signs_disjoint(c.wt(i), c.wf(i)))
      return false;
  // bc3
  if (c.wf(0).variable != c.wt(c.i0).variable ||
      c.wt(ell + 1).variable != c.wt(c.i1).variable)
    return false;
  // bc4
  for (std::uint32_t i = 0; i <= ell; ++i)
    if (!detail::clause_is(f.clause(c.clause_indices[i]), c.wf(i), c.wt(i + 1)))
      return false;
  return true;
}

/// Exhaustive depth-first search over chains of clauses linked through
/// disjoint literal pairs. `None` means no bicycle exists at all.
inline SearchResult<Bicycle> find_bicycle(const Formula &f,
                                          std::uint64_t budget = 10'000'000) {
  detail::require_arity_two(f);
  const auto occ = detail::occurrences_by_variable(f);
  auto lit = [&](const detail::Occurrence &o) -> const Literal & {
    return f.clause(o.clause).literals[o.pos];
  };

  std::vector<Literal> wt, wf;        // wt[0] unused placeholder for 1-based indexing
  std::vector<std::size_t> clauses;
  std::vector<char> used(f.n() + 1, 0);
  std::uint64_t expansions = 0;
  std::optional<Bicycle> found;

  auto close = [&](std::uint32_t ell, const Literal &last_wf, std::size_t last_clause,
                   const Literal &tail) -> bool {
    std::uint32_t i0 = 0, i1 = 0;
    for (std::uint32_t i = 2; i <= ell && i0 == 0; ++i)
      if (wt[i].variable == wf[0].variable)
        i0 = i;
    for (std::uint32_t i = 1; i + 1 <= ell && i1 == 0; ++i)
      if (wt[i].variable == tail.variable)
        i1 = i;
    if (i0 == 0 || i1 == 0)
      return false;
    Bicycle b;
    b.ell = ell;
    b.i0 = i0;
    b.i1 = i1;
    b.literals.push_back(wf[0]);
    for (std::uint32_t i = 1; i <= ell; ++i) {
      b.literals.push_back(wt[i]);
      b.literals.push_back(i == ell ? last_wf : wf[i]);
    }
    b.literals.push_back(tail);
    b.clause_indices.assign(clauses.begin(), clauses.end());
    b.clause_indices.push_back(last_clause);
    found = std::move(b);
    return true;
  };

  // Extends from w^t_i = wt.back(); returns true when a bicycle was found.
  auto extend = [&](auto &&self) -> bool {
    const std::uint32_t i = static_cast<std::uint32_t>(wt.size()) - 1;
    const Literal current = wt[i];
    for (const auto &o : occ[current.variable - 1]) {
      const Literal &partner = lit(o);
      if (!signs_disjoint(partner, current))
        continue;
      if (++expansions > budget)
        return false;
      const Literal &next = f.clause(o.clause).literals[1 - o.pos];
      if (used[next.variable]) {
        if (i >= 2 && close(i, partner, o.clause, next))
          return true;
        continue;
      }
      wf.push_back(partner);
      clauses.push_back(o.clause);
      wt.push_back(next);
      used[next.variable] = 1;
      if (self(self))
        return true;
      used[next.variable] = 0;
      wt.pop_back();
      clauses.pop_back();
      wf.pop_back();
      if (expansions > budget)
        return false;
    }
    return false;
  };

  for (std::uint32_t c0 = 0; c0 < f.m(); ++c0) {
    for (std::uint32_t p = 0; p < 2; ++p) {
      const Literal &first_wf = f.clause(c0).literals[p];
      const Literal &first_wt = f.clause(c0).literals[1 - p];
      // w^f_0 must share its variable with some w^t_i, i >= 2, all distinct
      // from w^t_1.
      if (first_wf.variable == first_wt.variable)
        continue;
      wf.assign({first_wf});
      wt.assign({Literal{}, first_wt});
      clauses.assign({c0});
      used[first_wt.variable] = 1;
      const bool hit = extend(extend);
      used[first_wt.variable] = 0;
      if (hit)
        return {SearchStatus::Found, std::move(found)};
      if (expansions > budget)
        return {SearchStatus::BudgetExhausted, std::nullopt};
    }
  }
  return {SearchStatus::None, std::nullopt};
}

/// Checks structure, clause membership and (sk1)-(sk3) against f. Uses
/// only literal semantics, never a decider.
inline bool verify_snake(const Formula &f, const Snake &s) {
  detail::require_arity_two(f);
  const std::uint32_t ell = s.ell;
  if (ell < 6 || ell % 2 != 0)
    throw Error(ErrorCode::OddLength, "snake length must be even and >= 6");
  if (s.b.size() != ell || s.links.size() != ell + 1)
    return false;
  for (const auto &link : s.links)
    detail::check_clause_index(f, link.clause);
  for (std::uint32_t i = 0; i < ell; ++i) {
    if (s.b[i] < 1 || s.b[i] > f.n())
      return false;
    for (std::uint32_t j = 0; j < i; ++j)
      if (s.b[i] == s.b[j])
        return false;
  }
  for (std::uint32_t i = 0; i <= ell; ++i) {
    const auto &link = s.links[i];
    if (link.left.variable != s.var(i) || link.right.variable != s.var(i + 1))
      return false;
    if (!detail::clause_is(f.clause(link.clause), link.left, link.right))
      return false;
  }
  auto L = [&](std::uint32_t i) -> const Literal & { return s.links[i].left; };
  auto R = [&](std::uint32_t i) -> const Literal & { return s.links[i - 1].right; };
  for (std::uint32_t i = 1; i <= ell; ++i)
    if (!signs_disjoint(R(i), L(i)))
      return false; // sk1
  if (!signs_disjoint(R(ell + 1), L(0)))
    return false; // sk2
  const std::uint32_t mid = ell / 2;
  return signs_disjoint(R(mid), R(ell + 1)) && signs_disjoint(L(mid), L(0)); // sk3
}

/// Best-effort snake search. Only literals inside a strongly connected
/// component holding a complementary pair can take part, so satisfiable
/// formulas return None immediately. Half-lengths are tried in increasing
/// order; `None` does not certify satisfiability.
inline SearchResult<Snake> find_snake(const Formula &f, std::uint64_t budget = 2'000'000) {
  detail::require_arity_two(f);
  if (f.m() < 7)
    return {SearchStatus::None, std::nullopt};

  const ImplicationDigraph g = build_implication_digraph(f);
  const auto comp = strongly_connected_components(g);
  std::vector<char> bad_comp(g.nodes.size(), 0);
  bool any_bad = false;
  for (std::uint32_t t = 0; t < g.nodes.size(); t += 2)
    if (comp[t] == comp[t + 1])
      bad_comp[comp[t]] = any_bad = true;
  if (!any_bad)
    return {SearchStatus::None, std::nullopt};

  // Occurrence id = 2*clause + pos.
  const auto occ_count = static_cast<std::uint32_t>(2 * f.m());
  auto lit_of = [&](std::uint32_t o) -> const Literal & {
    return f.clause(o / 2).literals[o % 2];
  };
  std::vector<char> eligible(occ_count, 0);
  std::vector<std::vector<std::uint32_t>> by_var(f.n());
  std::vector<std::uint32_t> active_vars;
  for (std::uint32_t o = 0; o < occ_count; ++o) {
    const std::uint32_t node = g.node_of(lit_of(o));
    if (node != ImplicationDigraph::kAlwaysTrue && bad_comp[comp[node]]) {
      eligible[o] = 1;
      by_var[lit_of(o).variable - 1].push_back(o);
    }
  }
  for (std::uint32_t v = 0; v < f.n(); ++v)
    if (!by_var[v].empty())
      active_vars.push_back(v + 1);

  // successors of a right-literal occurrence R: other(L) for eligible L on
  // R's variable disjoint from R.
  auto for_each_step = [&](std::uint32_t r, auto &&fn) {
    const Literal &rl = lit_of(r);
    for (auto l : by_var[rl.variable - 1]) {
      if (!signs_disjoint(lit_of(l), rl) || !eligible[l ^ 1u])
        continue;
      if (fn(l, l ^ 1u))
        return true;
    }
    return false;
  };

  constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(occ_count);
  std::vector<std::vector<std::uint32_t>> preds(occ_count);
  for (std::uint32_t r = 0; r < occ_count; ++r)
    if (eligible[r])
      for_each_step(r, [&](std::uint32_t, std::uint32_t next) {
        preds[next].push_back(r);
        return false;
      });
  // dist[o] = fewest steps from occurrence o to an occurrence on var z.
  auto compute_dist = [&](std::uint32_t z) {
    std::fill(dist.begin(), dist.end(), kFar);
    std::deque<std::uint32_t> queue;
    for (auto o : by_var[z - 1]) {
      dist[o] = 0;
      queue.push_back(o);
    }
    while (!queue.empty()) {
      const auto o = queue.front();
      queue.pop_front();
      for (auto p : preds[o])
        if (dist[p] == kFar) {
          dist[p] = dist[o] + 1;
          queue.push_back(p);
        }
    }
  };

  std::uint64_t expansions = 0;
  std::vector<char> used(f.n() + 1, 0);
  std::vector<Snake::Link> links;
  std::optional<Snake> found;

  const auto max_half = static_cast<std::uint32_t>(active_vars.size() / 2);
  for (std::uint32_t half = 3; half <= max_half; ++half) {
    const std::uint32_t ell = 2 * half;
    if (f.m() < ell + 1)
      break;
    for (auto z : active_vars) {
      compute_dist(z);
      used[z] = 1;
      // At right literal R_i (occurrence r) pick clause i.
      auto walk = [&](auto &&self, std::uint32_t i, std::uint32_t r) -> bool {
        if (++expansions > budget)
          return false;
        const std::uint32_t target = i < half ? half : ell + 1;
        if (dist[r] == kFar || i + dist[r] > target)
          return false;
        return for_each_step(r, [&](std::uint32_t l, std::uint32_t next) {
          const Literal &li = lit_of(l);
          const Literal &rn = lit_of(next);
          const Literal &l0 = links.front().left;
          if (i == half && !signs_disjoint(li, l0))
            return false; // sk3, left half
          const bool lands_on_z = rn.variable == z;
          if ((i + 1 == half || i + 1 == ell + 1) != lands_on_z)
            return false;
          if (!lands_on_z && used[rn.variable])
            return false;
          if (i + 1 == ell + 1) {
            const Literal &r_mid = links[half - 1].right;
            if (!signs_disjoint(rn, l0) || !signs_disjoint(rn, r_mid))
              return false; // sk2, sk3
            links.push_back({l / 2, li, rn});
            Snake s;
            s.ell = ell;
            s.links = links;
            for (std::uint32_t j = 1; j <= ell; ++j)
              s.b.push_back(links[j].left.variable);
            found = std::move(s);
            return true;
          }
          links.push_back({l / 2, li, rn});
          if (!lands_on_z)
            used[rn.variable] = 1;
          const bool hit = self(self, i + 1, next);
          if (!lands_on_z)
            used[rn.variable] = 0;
          if (hit)
            return true;
          links.pop_back();
          return expansions > budget;
        });
      };
      for (auto o0 : by_var[z - 1]) {
        const std::uint32_t r1 = o0 ^ 1u;
        const Literal &first = lit_of(r1);
        if (!eligible[r1] || first.variable == z)
          continue;
        links.assign({{o0 / 2, lit_of(o0), first}});
        used[first.variable] = 1;
        const bool hit = walk(walk, 1, r1);
        used[first.variable] = 0;
        if (found) {
          used[z] = 0;
          return {SearchStatus::Found, std::move(found)};
        }
        if (hit || expansions > budget) {
          used[z] = 0;
          return {SearchStatus::BudgetExhausted, std::nullopt};
        }
      }
      used[z] = 0;
    }
  }
  return {SearchStatus::None, std::nullopt};
}

} // namespace rsat
