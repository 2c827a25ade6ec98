#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

#include <boost/math/distributions/normal.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "rsat/error.hpp"

namespace rsat {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// One evaluated closed form together with its verdict against 1.
struct BoundReport {
  unsigned k = 0;
  long double c = 0;
  std::uint64_t v = 0; // 0 when the bound does not depend on v
  long double value = 0;
  bool below_one = false;
};

/// k * c * (1 - 2^-k)^(c-1); a value below 1 means random k-rSAT with
/// m = cn clauses over [0,1] is almost never satisfiable.
inline long double thm1_value(unsigned k, long double c) {
  if (k < 2)
    throw Error(ErrorCode::DomainError, "k must be at least 2");
  // c = 1 is accepted: the expression is defined there and equals k.
  if (!std::isfinite(c) || c < 1)
    throw Error(ErrorCode::DomainError, "c must be >= 1");
  const long double q = 1.0L - std::ldexp(1.0L, -static_cast<int>(k));
  return static_cast<long double>(k) * c * std::pow(q, c - 1.0L);
}

inline BoundReport thm1_report(unsigned k, long double c) {
  const long double value = thm1_value(k, c);
  return {k, c, 0, value, value < 1.0L};
}

/// Crossing of thm1_value(k, .) = 1 on its decreasing branch, by bisection
/// to 1e-9 in c.
inline long double thm1_root(unsigned k) {
  if (k < 2)
    throw Error(ErrorCode::DomainError, "k must be at least 2");
  const long double q = 1.0L - std::ldexp(1.0L, -static_cast<int>(k));
  // d/dc [c q^(c-1)] = 0 at c = -1/ln q; the function decreases beyond it.
  long double lo = std::max(1.0L, -1.0L / std::log(q));
  long double hi = 2 * lo;
  while (thm1_value(k, hi) >= 1.0L)
    hi *= 2;
  while (hi - lo > 1e-9L) {
    const long double mid = (lo + hi) / 2;
    (thm1_value(k, mid) >= 1.0L ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

/// log_{8/7}(v): the earlier first-moment bound for 3-rSAT with |V| = v.
inline long double bejar_bound(std::uint64_t v) {
  if (v < 2)
    throw Error(ErrorCode::DomainError, "v must be at least 2");
  return std::log(static_cast<long double>(v)) / std::log(8.0L / 7.0L);
}

/// 2 * ceil(ln n / ln(c/2)), the snake length used for c > 2.
inline std::uint64_t snake_length(std::uint64_t n, long double c) {
  if (!(c > 2))
    throw Error(ErrorCode::DomainError, "snake length needs c > 2");
  if (n < 2)
    throw Error(ErrorCode::DomainError, "snake length needs n >= 2");
  const long double ratio = std::log(static_cast<long double>(n)) / std::log(c / 2);
  return 2 * static_cast<std::uint64_t>(std::ceil(ratio));
}

/// (x)_d = x (x-1) ... (x-d+1); zero once the product passes 0.
inline BigInt falling_factorial(std::uint64_t x, std::uint64_t d) {
  if (d > x)
    return 0;
  BigInt out = 1;
  for (std::uint64_t i = 0; i < d; ++i)
    out *= BigInt(x - i);
  return out;
}

/// E prod_j (R_j)_{d_j} for R multinomial(km; 1/n, ..., 1/n), which equals
/// (km)_D / n^D with D = sum d_j.
inline BigRational exact_factorial_moment(std::uint64_t n, std::uint64_t m, unsigned k,
                                          std::span<const std::uint64_t> d) {
  if (d.size() != n)
    throw Error(ErrorCode::DomainError, "d must have one entry per variable");
  if (n == 0)
    throw Error(ErrorCode::DomainError, "n must be positive");
  std::uint64_t total = 0;
  for (auto x : d)
    total += x;
  BigInt denom = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(total));
  return BigRational(falling_factorial(k * m, total), denom);
}

/// (km/n)^D, the upper bound on exact_factorial_moment.
inline BigRational factorial_moment_bound(std::uint64_t n, std::uint64_t m, unsigned k,
                                          std::uint64_t total) {
  const auto e = static_cast<unsigned>(total);
  return BigRational(boost::multiprecision::pow(BigInt(k) * m, e),
                     boost::multiprecision::pow(BigInt(n), e));
}

/// (k c (1 - 2^-k)^(c-1))^n with c = m/n: the first-moment bound on the
/// expected number of satisfying tight interpretations.
inline long double expected_tight_bound(std::uint64_t n, std::uint64_t m, unsigned k) {
  if (n == 0 || m <= n)
    throw Error(ErrorCode::DomainError, "expected tight bound needs m > n");
  const long double c = static_cast<long double>(m) / static_cast<long double>(n);
  return std::pow(thm1_value(k, c), static_cast<long double>(n));
}

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                                 double confidence = 0.95) {
  if (trials == 0 || successes > trials)
    throw Error(ErrorCode::DomainError, "need 0 <= successes <= trials, trials >= 1");
  if (!(confidence > 0 && confidence < 1))
    throw Error(ErrorCode::DomainError, "confidence must lie in (0,1)");
  const double z =
      boost::math::quantile(boost::math::normal_distribution<double>(), (1 + confidence) / 2);
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1 + z2 / t;
  const double center = (p + z2 / (2 * t)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / t + z2 / (4 * t * t)) / denom;
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

} // namespace rsat
