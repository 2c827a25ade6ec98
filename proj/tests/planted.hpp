#pragma once

// Planted certificates for tests.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rsat/certificates.hpp"
#include "rsat/rng.hpp"
#include "rsat/sampler.hpp"

namespace planted {

using rsat::Clause;
using rsat::Literal;
using rsat::Threshold;

/// Uniform 53-bit value in (0, 1/2) and in (1/2, 1).
inline Threshold low_value(rsat::Rng &rng) {
  return Threshold::dyadic(1 + rng.below((std::uint64_t{1} << 52) - 1), 53);
}
inline Threshold high_value(rsat::Rng &rng) {
  return Threshold::dyadic((std::uint64_t{1} << 52) + 1 + rng.below((std::uint64_t{1} << 52) - 1),
                           53);
}

/// Disjoint pair (a, b) on `var`, orientation chosen at random.
inline std::pair<Literal, Literal> disjoint_pair(rsat::Rng &rng, std::uint32_t var) {
  const Literal le = Literal::le(var, low_value(rng));
  const Literal ge = Literal::ge(var, high_value(rng));
  if (rng.coin())
    return {le, ge};
  return {ge, le};
}

/// Snake over the distinct variables b[0..ell-1] (= b_1..b_ell). Its clauses
/// are appended to `clauses`; link indices are offset by `first_clause`.
inline rsat::Snake make_snake(rsat::Rng &rng, const std::vector<std::uint32_t> &b,
                              std::size_t first_clause, std::vector<Clause> &clauses) {
  const auto ell = static_cast<std::uint32_t>(b.size());
  rsat::Snake s;
  s.ell = ell;
  s.b = b;
  const std::uint32_t mid = ell / 2;
  const std::uint32_t x = b[mid - 1];
  // R[i], L[i] for i = 0..ell+1.
  std::vector<Literal> L(ell + 2), R(ell + 2);
  for (std::uint32_t i = 1; i <= ell; ++i) {
    if (i == mid)
      continue;
    auto [r, l] = disjoint_pair(rng, b[i - 1]);
    R[i] = r;
    L[i] = l;
  }
  // On x: L_0 and R_mid on one side, L_mid and R_{ell+1} on the other.
  const bool flip = rng.coin();
  auto side_a = [&] { return flip ? Literal::le(x, low_value(rng)) : Literal::ge(x, high_value(rng)); };
  auto side_b = [&] { return flip ? Literal::ge(x, high_value(rng)) : Literal::le(x, low_value(rng)); };
  L[0] = side_a();
  R[mid] = side_a();
  L[mid] = side_b();
  R[ell + 1] = side_b();
  for (std::uint32_t i = 0; i <= ell; ++i) {
    s.links.push_back({first_clause + clauses.size(), L[i], R[i + 1]});
    clauses.push_back(Clause{{L[i], R[i + 1]}});
  }
  return s;
}

/// Random F_2 formula on n variables with m random clauses and a planted
/// ell-snake; clause order is shuffled and the snake's indices follow.
inline std::pair<rsat::Formula, rsat::Snake> formula_with_snake(std::uint64_t seed,
                                                                std::uint32_t n,
                                                                std::uint64_t m,
                                                                std::uint32_t ell) {
  rsat::Rng rng(seed);
  rsat::GenConfig cfg;
  cfg.k = 2;
  cfg.n = n;
  cfg.m = m;
  cfg.seed = rng.next();
  std::vector<Clause> clauses = rsat::sample_formula(cfg).clauses();
  std::vector<std::uint32_t> vars(n);
  for (std::uint32_t j = 0; j < n; ++j)
    vars[j] = j + 1;
  for (std::uint32_t i = 0; i < ell; ++i)
    std::swap(vars[i], vars[i + rng.below(n - i)]);
  vars.resize(ell);
  std::vector<Clause> snake_clauses;
  rsat::Snake s = make_snake(rng, vars, 0, snake_clauses);
  std::vector<std::size_t> slot(clauses.size() + snake_clauses.size());
  for (std::size_t i = 0; i < slot.size(); ++i)
    slot[i] = i;
  for (std::size_t i = slot.size(); i > 1; --i)
    std::swap(slot[i - 1], slot[rng.below(i)]);
  std::vector<Clause> all(slot.size());
  for (std::size_t i = 0; i < clauses.size(); ++i)
    all[slot[i]] = clauses[i];
  for (std::size_t i = 0; i < snake_clauses.size(); ++i) {
    all[slot[clauses.size() + i]] = snake_clauses[i];
    s.links[i].clause = slot[clauses.size() + i];
  }
  return {rsat::Formula(2, n, std::move(all), rsat::TruthValueSpec::continuous(), true),
          std::move(s)};
}

} // namespace planted
