#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsat/error.hpp"
#include "rsat/formula.hpp"

namespace rsat {

/// Per-variable sorted, deduplicated literal bounds; {0} for variables that
/// do not occur. Restricting every variable to these values loses no
/// satisfying interpretation.
class CandidateDomain {
public:
  explicit CandidateDomain(const Formula &f) : values_(f.n()) {
    for (const auto &clause : f.clauses())
      for (const auto &lit : clause.literals)
        values_[lit.variable - 1].push_back(lit.bound);
    for (auto &vals : values_) {
      if (vals.empty()) {
        vals.push_back(Threshold::zero());
        continue;
      }
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    }
  }

  /// Sorted candidate values of variable `var` (1-based).
  const std::vector<Threshold> &operator[](std::uint32_t var) const {
    return values_.at(var - 1);
  }

  std::uint32_t size() const { return static_cast<std::uint32_t>(values_.size()); }

  /// Position of `t` in the domain of `var`; `t` must be a member.
  std::uint32_t index_of(std::uint32_t var, const Threshold &t) const {
    const auto &vals = (*this)[var];
    auto it = std::lower_bound(vals.begin(), vals.end(), t);
    if (it == vals.end() || *it != t)
      throw std::logic_error("value is not a candidate of variable " + std::to_string(var));
    return static_cast<std::uint32_t>(it - vals.begin());
  }

private:
  std::vector<std::vector<Threshold>> values_;
};

enum class SatStatus { SAT, UNSAT };

struct SolveResult {
  SatStatus status = SatStatus::UNSAT;
  /// Present iff SAT; tight (every value is a candidate of its variable).
  std::optional<Interpretation> witness;

  bool sat() const { return status == SatStatus::SAT; }
};

struct SolverOptions {
  /// Branch expansions before ResourceLimit is thrown.
  std::uint64_t node_budget = 20'000'000;
};

namespace detail {

/// A literal restated against its variable's candidate domain: LE keeps the
/// prefix [0, index], GE keeps the suffix [index, size).
struct DomainLiteral {
  std::uint32_t var; // 0-based
  bool le;
  std::uint32_t index;
};

struct CompiledFormula {
  CandidateDomain domain;
  std::vector<std::vector<DomainLiteral>> clauses;
  std::vector<std::vector<std::uint32_t>> occurs; // var -> clause ids

  explicit CompiledFormula(const Formula &f) : domain(f), clauses(f.m()), occurs(f.n()) {
    for (std::size_t c = 0; c < f.m(); ++c) {
      for (const auto &lit : f.clause(c).literals) {
        const std::uint32_t var = lit.variable - 1;
        clauses[c].push_back({var, lit.relation == Relation::LE,
                              domain.index_of(lit.variable, lit.bound)});
        if (occurs[var].empty() || occurs[var].back() != c)
          occurs[var].push_back(static_cast<std::uint32_t>(c));
      }
    }
  }
};

inline void check_witness(const Formula &f, const Interpretation &w) {
  if (!eval_formula(f, w))
    throw std::logic_error("decider produced a non-satisfying witness");
}

/// Backtracking over candidate domains. Since every literal is a prefix or a
/// suffix of its domain, the set of values still allowed for a variable is
/// always an interval [lo, hi].
class IntervalSearch {
public:
  IntervalSearch(const CompiledFormula &cf, std::uint64_t budget)
      : cf_(cf), budget_(budget), lo_(cf.domain.size()), hi_(cf.domain.size()) {
    for (std::uint32_t v = 0; v < cf.domain.size(); ++v) {
      lo_[v] = 0;
      hi_[v] = static_cast<std::uint32_t>(cf.domain[v + 1].size()) - 1;
    }
  }

  bool run() {
    for (std::uint32_t c = 0; c < cf_.clauses.size(); ++c)
      if (!examine(c))
        return false;
    if (!propagate())
      return false;
    return search();
  }

  std::uint32_t value_index(std::uint32_t var) const { return lo_[var]; }
  std::uint64_t nodes() const { return nodes_; }

private:
  enum class Truth { False, True, Open };

  Truth status(const DomainLiteral &l) const {
    if (l.le) {
      if (hi_[l.var] <= l.index) return Truth::True;
      if (lo_[l.var] > l.index) return Truth::False;
    } else {
      if (lo_[l.var] >= l.index) return Truth::True;
      if (hi_[l.var] < l.index) return Truth::False;
    }
    return Truth::Open;
  }

  void narrow(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == lo_[var] && hi == hi_[var])
      return;
    trail_.push_back({var, lo_[var], hi_[var]});
    lo_[var] = lo;
    hi_[var] = hi;
    queue_.push_back(var);
  }

  /// Makes `l` true (or false) by shrinking its variable's interval. Returns
  /// false if the interval becomes empty.
  bool enforce(const DomainLiteral &l, bool value) {
    std::uint32_t lo = lo_[l.var], hi = hi_[l.var];
    if (l.le == value) {
      // keep values <= index (LE true, or GE false meaning < index)
      const std::uint32_t cap = value ? l.index : l.index - 1;
      if (!value && l.index == 0)
        return false;
      hi = std::min(hi, cap);
    } else {
      const std::uint32_t floor = value ? l.index : l.index + 1;
      lo = std::max(lo, floor);
    }
    if (lo > hi)
      return false;
    narrow(l.var, lo, hi);
    return true;
  }

  /// Unit rule on one clause; false on conflict.
  bool examine(std::uint32_t c) {
    const DomainLiteral *open = nullptr;
    unsigned open_count = 0;
    for (const auto &l : cf_.clauses[c]) {
      switch (status(l)) {
      case Truth::True: return true;
      case Truth::Open:
        if (open == nullptr || open->var != l.var || open->le != l.le || open->index != l.index)
          ++open_count;
        open = &l;
        break;
      case Truth::False: break;
      }
    }
    if (open_count == 0)
      return false;
    if (open_count == 1)
      return enforce(*open, true);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const std::uint32_t var = queue_.back();
      queue_.pop_back();
      for (auto c : cf_.occurs[var])
        if (!examine(c)) {
          queue_.clear();
          return false;
        }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto &e = trail_.back();
      lo_[e.var] = e.lo;
      hi_[e.var] = e.hi;
      trail_.pop_back();
    }
  }

  /// Most constrained open clause: fewest non-false literals.
  std::optional<DomainLiteral> pick_branch() const {
    std::optional<DomainLiteral> best;
    unsigned best_open = std::numeric_limits<unsigned>::max();
    for (const auto &clause : cf_.clauses) {
      unsigned open = 0;
      const DomainLiteral *first = nullptr;
      bool satisfied = false;
      for (const auto &l : clause) {
        const Truth t = status(l);
        if (t == Truth::True) {
          satisfied = true;
          break;
        }
        if (t == Truth::Open) {
          ++open;
          if (first == nullptr)
            first = &l;
        }
      }
      if (!satisfied && open < best_open) {
        best_open = open;
        best = *first;
        if (open <= 2)
          break;
      }
    }
    return best;
  }

  bool search() {
    const auto branch = pick_branch();
    if (!branch)
      return true;
    for (bool value : {true, false}) {
      if (++nodes_ > budget_)
        throw Error(ErrorCode::ResourceLimit,
                    "node budget of " + std::to_string(budget_) + " exhausted");
      const std::size_t mark = trail_.size();
      if (enforce(*branch, value) && propagate() && search())
        return true;
      queue_.clear();
      undo(mark);
    }
    return false;
  }

  struct TrailEntry {
    std::uint32_t var, lo, hi;
  };

  const CompiledFormula &cf_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint32_t> lo_, hi_;
  std::vector<TrailEntry> trail_;
  std::vector<std::uint32_t> queue_;
};

} // namespace detail

/// Complete decider for any k. Search is restricted to the candidate domain,
/// which is exact because a satisfying interpretation can always be moved to
/// a tight one.
inline SolveResult solve_complete(const Formula &f, const SolverOptions &opts = {}) {
  const detail::CompiledFormula cf(f);
  detail::IntervalSearch search(cf, opts.node_budget);
  if (!search.run())
    return {SatStatus::UNSAT, std::nullopt};
  Interpretation w(f.n());
  for (std::uint32_t v = 1; v <= f.n(); ++v)
    w.set(v, cf.domain[v][search.value_index(v - 1)]);
  detail::check_witness(f, w);
  return {SatStatus::SAT, std::move(w)};
}

/// Implication digraph of a 2-rSAT formula over its candidate domain.
///
/// For a variable with candidates d_0 < ... < d_{r-1} there is one boolean
/// y_i = [x >= d_i] per i = 1..r-1. Node 2t is y_i, read as the literal
/// (GE d_i); node 2t+1 is its negation (LE d_{i-1}). Literals satisfied by
/// every candidate (GE d_0, LE d_{r-1}) have no node.
///
/// Clause edges: for (a or b), complement(a) -> b and complement(b) -> a.
/// Entailment edges: (GE d_{i+1}) -> (GE d_i) and (LE d_{i-1}) -> (LE d_i).
struct ImplicationDigraph {
  enum class EdgeKind { Clause, Entailment };
  struct Edge {
    std::uint32_t from, to;
    EdgeKind kind;
    std::uint32_t clause; // originating clause for Clause edges
  };

  static constexpr std::uint32_t kAlwaysTrue = std::numeric_limits<std::uint32_t>::max();

  CandidateDomain domain;
  std::vector<Literal> nodes;
  std::vector<std::uint32_t> var_base; // first node of each variable (0-based var)
  std::vector<Edge> edges;

  std::uint32_t complement(std::uint32_t node) const { return node ^ 1u; }

  /// Node of a literal whose bound is a candidate of its variable.
  std::uint32_t node_of(const Literal &lit) const {
    const std::uint32_t j = domain.index_of(lit.variable, lit.bound);
    const auto r = static_cast<std::uint32_t>(domain[lit.variable].size());
    const std::uint32_t base = var_base[lit.variable - 1];
    if (lit.relation == Relation::LE)
      return j + 1 == r ? kAlwaysTrue : base + 2 * j + 1;
    return j == 0 ? kAlwaysTrue : base + 2 * (j - 1);
  }
};

inline ImplicationDigraph build_implication_digraph(const Formula &f) {
  if (f.k() != 2)
    throw Error(ErrorCode::WrongArity, "implication digraph needs k = 2");
  ImplicationDigraph g{CandidateDomain(f), {}, {}, {}};
  g.var_base.resize(f.n());
  for (std::uint32_t v = 1; v <= f.n(); ++v) {
    g.var_base[v - 1] = static_cast<std::uint32_t>(g.nodes.size());
    const auto &dom = g.domain[v];
    for (std::size_t i = 1; i < dom.size(); ++i) {
      g.nodes.push_back(Literal::ge(v, dom[i]));
      g.nodes.push_back(Literal::le(v, dom[i - 1]));
      const auto pos = static_cast<std::uint32_t>(g.nodes.size() - 2);
      if (i > 1) {
        using K = ImplicationDigraph::EdgeKind;
        g.edges.push_back({pos, pos - 2, K::Entailment, 0});
        g.edges.push_back({pos - 1, pos + 1, K::Entailment, 0});
      }
    }
  }
  for (std::size_t c = 0; c < f.m(); ++c) {
    const auto &lits = f.clause(c).literals;
    const std::uint32_t a = g.node_of(lits[0]);
    const std::uint32_t b = g.node_of(lits[1]);
    if (a == ImplicationDigraph::kAlwaysTrue || b == ImplicationDigraph::kAlwaysTrue)
      continue;
    const auto cid = static_cast<std::uint32_t>(c);
    g.edges.push_back({g.complement(a), b, ImplicationDigraph::EdgeKind::Clause, cid});
    g.edges.push_back({g.complement(b), a, ImplicationDigraph::EdgeKind::Clause, cid});
  }
  return g;
}

/// Strongly connected components; ids are assigned in Tarjan completion
/// order, which is a reverse topological order of the condensation.
inline std::vector<std::uint32_t> strongly_connected_components(const ImplicationDigraph &g) {
  const auto n = static_cast<std::uint32_t>(g.nodes.size());
  std::vector<std::uint32_t> start(n + 1, 0), adj(g.edges.size());
  for (const auto &e : g.edges)
    ++start[e.from + 1];
  for (std::uint32_t i = 0; i < n; ++i)
    start[i + 1] += start[i];
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (const auto &e : g.edges)
      adj[fill[e.from]++] = e.to;
  }

  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n), comp(n, kUnvisited);
  std::vector<std::uint32_t> stack, call_stack, edge_pos(n);
  std::vector<char> on_stack(n, 0);
  std::uint32_t next_index = 0, next_comp = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited)
      continue;
    call_stack.push_back(root);
    index[root] = low[root] = next_index++;
    edge_pos[root] = start[root];
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call_stack.empty()) {
      const std::uint32_t v = call_stack.back();
      if (edge_pos[v] < start[v + 1]) {
        const std::uint32_t w = adj[edge_pos[v]++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          edge_pos[w] = start[w];
          stack.push_back(w);
          on_stack[w] = 1;
          call_stack.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      call_stack.pop_back();
      if (!call_stack.empty())
        low[call_stack.back()] = std::min(low[call_stack.back()], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  return comp;
}

/// Polynomial decider for k = 2. UNSAT iff some node shares a component with
/// its complement; otherwise each y_i is set true iff its component precedes
/// its complement's in Tarjan order.
inline SolveResult solve_2rsat_scc(const Formula &f) {
  if (f.k() != 2)
    throw Error(ErrorCode::WrongArity, "SCC decider needs k = 2");
  const ImplicationDigraph g = build_implication_digraph(f);
  const auto comp = strongly_connected_components(g);
  for (std::uint32_t t = 0; t < g.nodes.size(); t += 2)
    if (comp[t] == comp[t + 1])
      return {SatStatus::UNSAT, std::nullopt};

  Interpretation w(f.n());
  for (std::uint32_t v = 1; v <= f.n(); ++v) {
    const auto &dom = g.domain[v];
    std::size_t chosen = 0;
    for (std::size_t i = 1; i < dom.size(); ++i) {
      const std::uint32_t pos = g.var_base[v - 1] + 2 * static_cast<std::uint32_t>(i - 1);
      if (comp[pos] < comp[pos + 1])
        chosen = i;
    }
    w.set(v, dom[chosen]);
  }
  detail::check_witness(f, w);
  return {SatStatus::SAT, std::move(w)};
}

enum class Decider { Auto, Scc, Complete };

inline SolveResult solve(const Formula &f, Decider decider = Decider::Auto,
                         const SolverOptions &opts = {}) {
  if (decider == Decider::Scc || (decider == Decider::Auto && f.k() == 2))
    return solve_2rsat_scc(f);
  return solve_complete(f, opts);
}

/// Number of tight interpretations (one candidate per variable) satisfying
/// f. Throws ResourceLimit if the product of domain sizes exceeds `budget`.
inline std::uint64_t count_tight_satisfying(const Formula &f,
                                            std::uint64_t budget = 10'000'000) {
  const detail::CompiledFormula cf(f);
  std::uint64_t product = 1;
  for (std::uint32_t v = 1; v <= f.n(); ++v) {
    const std::uint64_t size = cf.domain[v].size();
    if (product > budget / size)
      throw Error(ErrorCode::ResourceLimit, "tight interpretation space exceeds budget");
    product *= size;
  }

  // Each clause is checked once the highest of its variables is assigned.
  std::vector<std::vector<std::uint32_t>> due(f.n());
  for (std::uint32_t c = 0; c < cf.clauses.size(); ++c) {
    std::uint32_t last = 0;
    for (const auto &l : cf.clauses[c])
      last = std::max(last, l.var);
    due[last].push_back(c);
  }

  std::vector<std::uint32_t> value(f.n(), 0);
  auto holds = [&](const detail::DomainLiteral &l) {
    return l.le ? value[l.var] <= l.index : value[l.var] >= l.index;
  };
  std::uint64_t count = 0;
  auto visit = [&](auto &&self, std::uint32_t var) -> void {
    if (var == f.n()) {
      ++count;
      return;
    }
    const auto size = static_cast<std::uint32_t>(cf.domain[var + 1].size());
    for (std::uint32_t i = 0; i < size; ++i) {
      value[var] = i;
      bool ok = true;
      for (auto c : due[var]) {
        if (std::none_of(cf.clauses[c].begin(), cf.clauses[c].end(), holds)) {
          ok = false;
          break;
        }
      }
      if (ok)
        self(self, var + 1);
    }
  };
  visit(visit, 0);
  return count;
}

} // namespace rsat
