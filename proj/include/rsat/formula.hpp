#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rsat/error.hpp"
#include "rsat/threshold.hpp"

namespace rsat {

/// Ordered truth-value set V. All three families are symmetric and contain
/// both 0 and 1.
///
///  - Finite(v):     {u/(v-1) : u = 0..v-1}
///  - Dyadic(l):     {j/2^l : j = 0..2^l-1} together with 1, so |V| = 2^l + 1
///  - Continuous:    the whole interval [0,1]
class TruthValueSpec {
public:
  enum class Kind { Finite, Dyadic, Continuous };

  static constexpr unsigned kMaxDyadicBits = 62;

  static TruthValueSpec finite(std::uint64_t v) {
    if (v < 2)
      throw Error(ErrorCode::InvalidConfig, "finite truth-value set needs v >= 2");
    return TruthValueSpec(Kind::Finite, v);
  }
  static TruthValueSpec dyadic(unsigned lambda) {
    if (lambda > kMaxDyadicBits)
      throw Error(ErrorCode::InvalidConfig, "dyadic precision above 62 bits");
    return TruthValueSpec(Kind::Dyadic, lambda);
  }
  static TruthValueSpec continuous() { return TruthValueSpec(Kind::Continuous, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_dyadic() const { return kind_ == Kind::Dyadic; }
  bool is_continuous() const { return kind_ == Kind::Continuous; }

  /// v for Finite, lambda for Dyadic, 0 for Continuous.
  std::uint64_t parameter() const { return param_; }

  /// |V|, or nullopt for the continuum.
  std::optional<std::uint64_t> cardinality() const {
    switch (kind_) {
    case Kind::Finite: return param_;
    case Kind::Dyadic: return (std::uint64_t{1} << param_) + 1;
    case Kind::Continuous: return std::nullopt;
    }
    return std::nullopt;
  }

  bool contains(const Threshold &t) const {
    switch (kind_) {
    case Kind::Finite:
      return (param_ - 1) % t.denominator() == 0;
    case Kind::Dyadic: {
      const auto den = t.denominator();
      if ((den & (den - 1)) != 0)
        return false;
      return den <= (std::uint64_t{1} << param_);
    }
    case Kind::Continuous:
      return true;
    }
    return false;
  }

  /// Sorted elements of V. Throws DomainError for Continuous or huge sets.
  std::vector<Threshold> elements(std::uint64_t limit = 1u << 20) const {
    const auto card = cardinality();
    if (!card || *card > limit)
      throw Error(ErrorCode::DomainError, "truth-value set too large to enumerate");
    std::vector<Threshold> out;
    out.reserve(*card);
    if (kind_ == Kind::Finite) {
      for (std::uint64_t u = 0; u < param_; ++u)
        out.emplace_back(u, param_ - 1);
    } else {
      const std::uint64_t top = std::uint64_t{1} << param_;
      for (std::uint64_t j = 0; j <= top; ++j)
        out.emplace_back(j, top);
    }
    return out;
  }

  std::string to_string() const {
    switch (kind_) {
    case Kind::Finite: return "finite:" + std::to_string(param_);
    case Kind::Dyadic: return "dyadic:" + std::to_string(param_);
    case Kind::Continuous: return "continuous";
    }
    return "?";
  }

  friend bool operator==(const TruthValueSpec &, const TruthValueSpec &) = default;

private:
  TruthValueSpec(Kind kind, std::uint64_t param) : kind_(kind), param_(param) {}

  Kind kind_ = Kind::Continuous;
  std::uint64_t param_ = 0;
};

enum class Relation : std::uint8_t { LE, GE };

/// `x_variable <= bound` or `x_variable >= bound`; variables are 1-based.
struct Literal {
  std::uint32_t variable = 1;
  Relation relation = Relation::LE;
  Threshold bound;

  static Literal le(std::uint32_t var, Threshold b) { return {var, Relation::LE, b}; }
  static Literal ge(std::uint32_t var, Threshold b) { return {var, Relation::GE, b}; }

  /// Builds a literal from the sampling encoding (x, rho, a), where GE means
  /// x >= 1 - a.
  static Literal from_encoded(std::uint32_t var, Relation rel, Threshold a) {
    return {var, rel, rel == Relation::LE ? a : a.reflected()};
  }

  /// Inverse of from_encoded: a for LE, 1 - bound for GE.
  Threshold encoded_side() const {
    return relation == Relation::LE ? bound : bound.reflected();
  }

  bool is_innocuous() const {
    return relation == Relation::LE ? bound.is_one() : bound.is_zero();
  }

  friend bool operator==(const Literal &, const Literal &) = default;
};

inline bool eval_literal(const Literal &lit, const Threshold &value) {
  return lit.relation == Relation::LE ? value <= lit.bound : value >= lit.bound;
}

/// True iff no value satisfies both literals (closed half-lines, so equal
/// bounds of opposite relation still share that value).
inline bool signs_disjoint(const Literal &l1, const Literal &l2) {
  if (l1.relation == l2.relation)
    return false;
  const Literal &le = l1.relation == Relation::LE ? l1 : l2;
  const Literal &ge = l1.relation == Relation::GE ? l1 : l2;
  return ge.bound > le.bound;
}

/// Weakest literal over the sorted `domain` that is disjoint from `lit`, or
/// nullopt when every domain value satisfies `lit`.
inline std::optional<Literal> complement_literal(const Literal &lit,
                                                 std::span<const Threshold> domain) {
  if (domain.empty())
    throw Error(ErrorCode::EmptyDomain, "complement over an empty domain");
  if (lit.relation == Relation::LE) {
    auto it = std::upper_bound(domain.begin(), domain.end(), lit.bound);
    if (it == domain.end())
      return std::nullopt;
    return Literal::ge(lit.variable, *it);
  }
  auto it = std::lower_bound(domain.begin(), domain.end(), lit.bound);
  if (it == domain.begin())
    return std::nullopt;
  return Literal::le(lit.variable, *std::prev(it));
}

struct Clause {
  std::vector<Literal> literals;

  friend bool operator==(const Clause &, const Clause &) = default;
};

/// Regular signed k-CNF: disjunction inside a clause, conjunction across
/// clauses. Immutable once constructed; the constructor enforces every
/// structural invariant.
class Formula {
public:
  Formula(unsigned k, std::uint32_t n, std::vector<Clause> clauses,
          TruthValueSpec vspec, bool distinct_vars_per_clause)
      : k_(k), n_(n), clauses_(std::move(clauses)), vspec_(vspec),
        distinct_(distinct_vars_per_clause) {
    if (k_ < 1)
      throw Error(ErrorCode::InvalidConfig, "clause width must be positive");
    for (std::size_t c = 0; c < clauses_.size(); ++c) {
      const auto &lits = clauses_[c].literals;
      const std::string where = "clause " + std::to_string(c);
      if (lits.size() != k_)
        throw Error(ErrorCode::InvalidConfig, where + " does not have k literals");
      for (std::size_t i = 0; i < lits.size(); ++i) {
        const Literal &l = lits[i];
        if (l.variable < 1 || l.variable > n_)
          throw Error(ErrorCode::InvalidConfig, where + ": variable out of range");
        if (l.is_innocuous())
          throw Error(ErrorCode::InvalidConfig, where + ": innocuous literal");
        if (!vspec_.contains(l.bound))
          throw Error(ErrorCode::InvalidConfig,
                      where + ": bound " + l.bound.to_string() + " not in " +
                          vspec_.to_string());
        if (distinct_)
          for (std::size_t j = 0; j < i; ++j)
            if (lits[j].variable == l.variable)
              throw Error(ErrorCode::InvalidConfig, where + ": repeated variable");
      }
    }
  }

  unsigned k() const { return k_; }
  std::uint32_t n() const { return n_; }
  std::size_t m() const { return clauses_.size(); }
  const std::vector<Clause> &clauses() const { return clauses_; }
  const Clause &clause(std::size_t i) const { return clauses_.at(i); }
  const TruthValueSpec &vspec() const { return vspec_; }
  bool distinct_vars_per_clause() const { return distinct_; }

  friend bool operator==(const Formula &, const Formula &) = default;

private:
  unsigned k_;
  std::uint32_t n_;
  std::vector<Clause> clauses_;
  TruthValueSpec vspec_;
  bool distinct_;
};

/// Assignment of truth values to variables 1..n; unassigned entries allowed.
class Interpretation {
public:
  Interpretation() = default;
  explicit Interpretation(std::uint32_t n) : values_(n) {}

  std::uint32_t size() const { return static_cast<std::uint32_t>(values_.size()); }

  void set(std::uint32_t var, Threshold value) { values_.at(var - 1) = value; }
  const std::optional<Threshold> &get(std::uint32_t var) const {
    return values_.at(var - 1);
  }

  friend bool operator==(const Interpretation &, const Interpretation &) = default;

private:
  std::vector<std::optional<Threshold>> values_;
};

inline bool eval_formula(const Formula &f, const Interpretation &interp) {
  bool all = true;
  for (const auto &clause : f.clauses()) {
    bool sat = false;
    for (const auto &lit : clause.literals) {
      if (lit.variable > interp.size() || !interp.get(lit.variable))
        throw Error(ErrorCode::MissingAssignment,
                    "variable " + std::to_string(lit.variable) + " has no value");
      sat = sat || eval_literal(lit, *interp.get(lit.variable));
    }
    // Keep scanning after a falsified clause so that missing values are
    // always reported.
    all = all && sat;
  }
  return all;
}

/// R_j = number of literal slots holding variable j.
struct OccurrenceProfile {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t s = 0;
    for (auto c : counts)
      s += c;
    return s;
  }

  friend bool operator==(const OccurrenceProfile &, const OccurrenceProfile &) = default;
};

inline OccurrenceProfile occurrence_profile(const Formula &f) {
  OccurrenceProfile r;
  r.counts.assign(f.n(), 0);
  for (const auto &clause : f.clauses())
    for (const auto &lit : clause.literals)
      ++r.counts[lit.variable - 1];
  return r;
}

} // namespace rsat
