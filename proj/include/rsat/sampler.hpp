#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "rsat/error.hpp"
#include "rsat/formula.hpp"
#include "rsat/rng.hpp"

namespace rsat {

/// Parameters of one random formula. `distinct_vars_per_clause` selects the
/// F model (true) or the F' model with repeats inside a clause (false).
struct GenConfig {
  unsigned k = 2;
  std::uint32_t n = 1;
  std::uint64_t m = 0;
  TruthValueSpec vspec = TruthValueSpec::continuous();
  bool distinct_vars_per_clause = true;
  std::uint64_t seed = 0;
  /// Continuous only: redraw an encoded side that collides with an earlier
  /// one, so that all right-hand sides in the formula are distinct.
  bool distinct_thresholds = false;
};

/// Low and high formula of the v -> v+1 monotone coupling. Same shape;
/// only threshold values differ.
struct CoupledPair {
  Formula low;
  Formula high;
};

/// Bits per continuous right-hand side; samples are j / 2^53.
inline constexpr unsigned kContinuousBits = 53;

namespace detail {

inline void validate(const GenConfig &cfg) {
  if (cfg.k < 1 || cfg.n < 1)
    throw Error(ErrorCode::InvalidConfig, "k and n must be positive");
  if (cfg.distinct_vars_per_clause && cfg.k > cfg.n)
    throw Error(ErrorCode::InvalidConfig, "k > n with distinct variables per clause");
  if (cfg.distinct_thresholds && !cfg.vspec.is_continuous())
    throw Error(ErrorCode::InvalidConfig,
                "distinct thresholds are only available for continuous sampling");
}

/// Uniform draw from V \ {1}.
inline Threshold draw_encoded_side(Rng &rng, const TruthValueSpec &vspec) {
  switch (vspec.kind()) {
  case TruthValueSpec::Kind::Finite: {
    const std::uint64_t top = vspec.parameter() - 1;
    return Threshold(rng.below(top), top);
  }
  case TruthValueSpec::Kind::Dyadic: {
    const auto bits = static_cast<unsigned>(vspec.parameter());
    return Threshold::dyadic(rng.bits(bits), bits);
  }
  case TruthValueSpec::Kind::Continuous:
    break;
  }
  return Threshold::dyadic(rng.bits(kContinuousBits), kContinuousBits);
}

class ConstraintDrawer {
public:
  ConstraintDrawer(const GenConfig &cfg) : cfg_(cfg) {}

  Literal draw(Rng &rng, std::uint32_t var) {
    const Relation rel = rng.coin() ? Relation::GE : Relation::LE;
    Threshold a = draw_encoded_side(rng, cfg_.vspec);
    if (cfg_.distinct_thresholds) {
      // Continuous sides all share the denominator 2^53 before reduction.
      auto key = [](const Threshold &t) {
        return t.numerator() << (kContinuousBits - std::countr_zero(t.denominator()));
      };
      while (!seen_.insert(key(a)).second)
        a = draw_encoded_side(rng, cfg_.vspec);
    }
    return Literal::from_encoded(var, rel, a);
  }

private:
  const GenConfig &cfg_;
  std::unordered_set<std::uint64_t> seen_;
};

/// Uniform ordered k-tuple of distinct values from 1..n: the i-th pick is the
/// r-th smallest value not yet chosen, r uniform. Same law as a partial
/// Fisher-Yates shuffle without materializing 1..n.
inline void draw_distinct(Rng &rng, std::uint32_t n, unsigned k,
                          std::vector<std::uint32_t> &out) {
  out.clear();
  std::vector<std::uint32_t> sorted;
  for (unsigned i = 0; i < k; ++i) {
    auto value = static_cast<std::uint32_t>(rng.below(n - i)) + 1;
    for (auto chosen : sorted)
      if (value >= chosen)
        ++value;
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), value), value);
    out.push_back(value);
  }
}

} // namespace detail

/// Uniform random k-rSAT formula; fully determined by `cfg.seed`.
inline Formula sample_formula(const GenConfig &cfg) {
  detail::validate(cfg);
  Rng rng(cfg.seed);
  detail::ConstraintDrawer drawer(cfg);
  std::vector<Clause> clauses(cfg.m);
  std::vector<std::uint32_t> vars;
  for (auto &clause : clauses) {
    if (cfg.distinct_vars_per_clause) {
      detail::draw_distinct(rng, cfg.n, cfg.k, vars);
    } else {
      vars.resize(cfg.k);
      for (auto &v : vars)
        v = static_cast<std::uint32_t>(rng.below(cfg.n)) + 1;
    }
    clause.literals.reserve(cfg.k);
    for (auto v : vars)
      clause.literals.push_back(drawer.draw(rng, v));
  }
  return Formula(cfg.k, cfg.n, std::move(clauses), cfg.vspec,
                 cfg.distinct_vars_per_clause);
}

/// Occurrence profile of an F' formula without drawing constraint parts:
/// each of the `slots` slots picks a variable uniformly, so R is
/// multinomial(slots; 1/n, ..., 1/n).
inline OccurrenceProfile sample_occurrence_profile(std::uint32_t n, std::uint64_t slots,
                                                   Rng &rng) {
  if (n < 1)
    throw Error(ErrorCode::InvalidConfig, "n must be positive");
  OccurrenceProfile r;
  r.counts.assign(n, 0);
  for (std::uint64_t s = 0; s < slots; ++s)
    ++r.counts[rng.below(n)];
  return r;
}

/// Random formula conditioned on the occurrence profile: R_j copies of each
/// variable are matched to the k*m slots by a uniform random permutation.
inline Formula sample_formula_given_profile(const GenConfig &cfg,
                                            const OccurrenceProfile &r,
                                            std::uint64_t seed) {
  if (cfg.distinct_vars_per_clause)
    throw Error(ErrorCode::InvalidConfig,
                "profile-conditioned sampling allows repeated variables in a clause");
  GenConfig base = cfg;
  base.seed = seed;
  detail::validate(base);
  if (r.counts.size() != cfg.n)
    throw Error(ErrorCode::ProfileMismatch, "profile length differs from n");
  const std::uint64_t slots = static_cast<std::uint64_t>(cfg.k) * cfg.m;
  if (r.total() != slots)
    throw Error(ErrorCode::ProfileMismatch, "profile does not sum to k*m");

  std::vector<std::uint32_t> points;
  points.reserve(slots);
  for (std::uint32_t j = 0; j < cfg.n; ++j)
    points.insert(points.end(), r.counts[j], j + 1);

  Rng rng(seed);
  for (std::uint64_t i = slots; i > 1; --i)
    std::swap(points[i - 1], points[rng.below(i)]);

  detail::ConstraintDrawer drawer(base);
  std::vector<Clause> clauses(cfg.m);
  std::size_t slot = 0;
  for (auto &clause : clauses) {
    clause.literals.reserve(cfg.k);
    for (unsigned i = 0; i < cfg.k; ++i)
      clause.literals.push_back(drawer.draw(rng, points[slot++]));
  }
  return Formula(cfg.k, cfg.n, std::move(clauses), cfg.vspec, false);
}

/// Couples a formula over Finite(v) with one over Finite(v+1). Each encoded
/// side u/(v-1) is rescaled to u/v and then bumped to (u+1)/v with
/// probability (u+1)/v, independently per literal. If the low side is uniform
/// on V \ {1}, the high side is uniform on V' \ {1}.
inline CoupledPair couple_increase_v(const Formula &f, std::uint64_t seed) {
  if (!f.vspec().is_finite())
    throw Error(ErrorCode::WrongVspec, "coupling needs a finite truth-value set");
  const std::uint64_t v = f.vspec().parameter();
  Rng rng(seed);
  std::vector<Clause> clauses = f.clauses();
  for (auto &clause : clauses) {
    for (auto &lit : clause.literals) {
      const Threshold a = lit.encoded_side();
      const std::uint64_t u = a.numerator() * ((v - 1) / a.denominator());
      const std::uint64_t w = u + (rng.bernoulli(u + 1, v) ? 1 : 0);
      lit = Literal::from_encoded(lit.variable, lit.relation, Threshold(w, v));
    }
  }
  Formula high(f.k(), f.n(), std::move(clauses), TruthValueSpec::finite(v + 1),
               f.distinct_vars_per_clause());
  return CoupledPair{f, std::move(high)};
}

/// Keeps the first `lambda` binary digits of every encoded side; the result
/// lives in Dyadic(lambda).
inline Formula truncate_thresholds(const Formula &f, unsigned lambda) {
  const auto vspec = TruthValueSpec::dyadic(lambda);
  std::vector<Clause> clauses = f.clauses();
  for (auto &clause : clauses)
    for (auto &lit : clause.literals)
      lit = Literal::from_encoded(lit.variable, lit.relation,
                                  lit.encoded_side().truncated(lambda));
  return Formula(f.k(), f.n(), std::move(clauses), vspec,
                 f.distinct_vars_per_clause());
}

/// Largest lambda for which two distinct encoded sides share all binary
/// digits up to 2^-lambda, plus one. Formulas with fewer than two literals
/// give 0.
inline unsigned min_safe_lambda(const Formula &f) {
  std::vector<Threshold> sides;
  for (const auto &clause : f.clauses())
    for (const auto &lit : clause.literals)
      sides.push_back(lit.encoded_side());
  std::sort(sides.begin(), sides.end());
  if (sides.size() < 2)
    return 0;
  unsigned longest_common = 0;
  for (std::size_t i = 1; i < sides.size(); ++i) {
    if (sides[i - 1] == sides[i])
      throw Error(ErrorCode::DuplicateThresholds,
                  "encoded side " + sides[i].to_string() + " occurs twice");
    // Adjacent pairs in sorted order realize the longest common prefix.
    unsigned lambda = 0;
    while (sides[i - 1].binary_prefix(lambda + 1) == sides[i].binary_prefix(lambda + 1)) {
      ++lambda;
      if (lambda >= TruthValueSpec::kMaxDyadicBits)
        throw Error(ErrorCode::DomainError, "encoded sides agree beyond 62 bits");
    }
    longest_common = std::max(longest_common, lambda);
  }
  return longest_common + 1;
}

} // namespace rsat
