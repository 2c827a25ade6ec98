#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "rsat/error.hpp"

namespace rsat {

/// Exact rational in [0,1], always stored in lowest terms.
///
/// Used for literal bounds, truth values and the dyadic expansions produced by
/// the samplers. Comparison cross-multiplies in 128 bits, so any pair of
/// 64-bit fractions orders exactly.
class Threshold {
public:
  using value_type = std::uint64_t;

  constexpr Threshold() = default;

  /// Reduces `num/den`; throws DomainError unless 0 <= num/den <= 1, den > 0.
  Threshold(value_type num, value_type den) {
    if (den == 0)
      throw Error(ErrorCode::DomainError, "threshold denominator is zero");
    if (num > den)
      throw Error(ErrorCode::DomainError, "threshold exceeds 1");
    const value_type g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Threshold zero() { return {}; }
  static Threshold one() { return Threshold(1, 1); }

  /// j / 2^bits, reduced.
  static Threshold dyadic(value_type j, unsigned bits) {
    if (bits > 63)
      throw Error(ErrorCode::DomainError, "dyadic precision above 63 bits");
    return Threshold(j, value_type{1} << bits);
  }

  static bool is_reduced(value_type num, value_type den) {
    return den != 0 && std::gcd(num, den) == 1;
  }

  value_type numerator() const { return num_; }
  value_type denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }

  /// 1 - x.
  Threshold reflected() const {
    Threshold t;
    t.num_ = den_ - num_;
    t.den_ = den_;
    return t;
  }

  /// floor(x * 2^bits), i.e. the first `bits` binary digits of x as an integer.
  /// Only meaningful for x < 1.
  value_type binary_prefix(unsigned bits) const {
    if (bits > 63)
      throw Error(ErrorCode::DomainError, "binary prefix above 63 bits");
    const unsigned __int128 scaled =
        (static_cast<unsigned __int128>(num_) << bits) / den_;
    return static_cast<value_type>(scaled);
  }

  /// x truncated after the 2^-bits digit.
  Threshold truncated(unsigned bits) const {
    return dyadic(binary_prefix(bits), bits);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Threshold &a, const Threshold &b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Threshold &a,
                                          const Threshold &b) {
    const auto lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
    const auto rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
    if (lhs < rhs)
      return std::strong_ordering::less;
    if (lhs > rhs)
      return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream &operator<<(std::ostream &os, const Threshold &t) {
    return os << t.num_ << '/' << t.den_;
  }

private:
  value_type num_ = 0;
  value_type den_ = 1;
};

} // namespace rsat
