#include <cmath>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rsat/sampler.hpp"
#include "rsat/solver.hpp"
#include "test_util.hpp"

using namespace rsat;
using testutil::code_of;
using testutil::ge;
using testutil::le;

namespace {

GenConfig config(unsigned k, std::uint32_t n, std::uint64_t m, TruthValueSpec vspec,
                 bool distinct, std::uint64_t seed) {
  GenConfig cfg;
  cfg.k = k;
  cfg.n = n;
  cfg.m = m;
  cfg.vspec = vspec;
  cfg.distinct_vars_per_clause = distinct;
  cfg.seed = seed;
  return cfg;
}

// |hits/draws - p| within three binomial standard deviations.
void expect_within_3sigma(std::uint64_t hits, std::uint64_t draws, double p) {
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(draws));
  EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(draws), p, 3 * sigma)
      << hits << " / " << draws << " vs " << p;
}

Formula le_sides(const std::vector<Threshold> &sides) {
  std::vector<Clause> cs;
  for (std::size_t i = 0; i < sides.size(); ++i)
    cs.push_back(Clause{{Literal::le(static_cast<std::uint32_t>(i + 1), sides[i])}});
  return Formula(1, static_cast<std::uint32_t>(sides.size()), cs, TruthValueSpec::continuous(),
                 true);
}

} // namespace

TEST(SampleFormula, RejectsKAboveNWithDistinctVariables) {
  EXPECT_EQ(code_of([] { sample_formula(config(2, 1, 1, TruthValueSpec::continuous(), true, 0)); }),
            ErrorCode::InvalidConfig);
  EXPECT_NO_THROW(sample_formula(config(2, 1, 1, TruthValueSpec::continuous(), false, 0)));
}

TEST(SampleFormula, FiniteTwoIsClassicalEmbedding) {
  const auto f = sample_formula(config(3, 10, 200, TruthValueSpec::finite(2), true, 3));
  for (const auto &c : f.clauses())
    for (const auto &l : c.literals) {
      EXPECT_TRUE(l == Literal::le(l.variable, Threshold::zero()) ||
                  l == Literal::ge(l.variable, Threshold::one()));
    }
}

TEST(SampleFormula, DeterministicInSeed) {
  for (auto spec : {TruthValueSpec::finite(4), TruthValueSpec::dyadic(5),
                    TruthValueSpec::continuous()}) {
    const auto a = sample_formula(config(3, 20, 50, spec, true, 99));
    const auto b = sample_formula(config(3, 20, 50, spec, true, 99));
    const auto c = sample_formula(config(3, 20, 50, spec, true, 100));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
  }
}

TEST(SampleFormula, StructuralInvariantsProperty) {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const unsigned k = 1 + static_cast<unsigned>(rng.below(4));
    const auto n = static_cast<std::uint32_t>(k + rng.below(6));
    const TruthValueSpec specs[] = {TruthValueSpec::finite(2 + rng.below(6)),
                                    TruthValueSpec::dyadic(static_cast<unsigned>(rng.below(6))),
                                    TruthValueSpec::continuous()};
    const auto spec = specs[rng.below(3)];
    const bool distinct = rng.coin();
    const auto f = sample_formula(config(k, n, rng.below(30), spec, distinct, rng.next()));
    for (const auto &c : f.clauses()) {
      ASSERT_EQ(c.literals.size(), k);
      std::set<std::uint32_t> vars;
      for (const auto &l : c.literals) {
        EXPECT_FALSE(l.is_innocuous());
        EXPECT_TRUE(spec.contains(l.bound));
        EXPECT_FALSE(l.encoded_side().is_one());
        vars.insert(l.variable);
      }
      if (distinct) {
        EXPECT_EQ(vars.size(), k);
      }
    }
  }
}

TEST(SampleFormula, ConstraintSatisfiedAtHalfWithProbabilityHalf) {
  const std::uint64_t draws = 100000;
  const auto f = sample_formula(config(1, 1, draws, TruthValueSpec::continuous(), true, 2024));
  std::uint64_t hits = 0;
  for (const auto &c : f.clauses())
    hits += oracle::holds(c.literals[0], Threshold(1, 2));
  expect_within_3sigma(hits, draws, 0.5);
}

TEST(SampleFormula, TwoConstraintsDisjointWithProbabilityQuarter) {
  const std::uint64_t draws = 100000;
  const auto f = sample_formula(config(2, 2, draws, TruthValueSpec::continuous(), true, 77));
  std::uint64_t hits = 0;
  for (const auto &c : f.clauses()) {
    // Disjoint iff relations differ and the GE bound exceeds the LE bound.
    const auto &a = c.literals[0], &b = c.literals[1];
    if (a.relation != b.relation) {
      const auto &l = a.relation == Relation::LE ? a : b;
      const auto &g = a.relation == Relation::LE ? b : a;
      hits += !oracle::leq(g.bound, l.bound);
    }
  }
  expect_within_3sigma(hits, draws, 0.25);
}

TEST(SampleFormula, EncodedSideUniformOnFiniteSet) {
  const std::uint64_t v = 5, draws = 100000;
  const auto f = sample_formula(config(1, 1, draws, TruthValueSpec::finite(v), true, 8));
  std::map<Threshold, std::uint64_t> counts;
  std::uint64_t ge_count = 0;
  for (const auto &c : f.clauses()) {
    ++counts[c.literals[0].encoded_side()];
    ge_count += c.literals[0].relation == Relation::GE;
  }
  ASSERT_EQ(counts.size(), v - 1);
  for (std::uint64_t u = 0; u + 1 < v; ++u)
    expect_within_3sigma(counts[Threshold(u, v - 1)], draws, 1.0 / static_cast<double>(v - 1));
  expect_within_3sigma(ge_count, draws, 0.5);
}

TEST(SampleFormula, DistinctThresholdSwitch) {
  auto cfg = config(2, 5, 400, TruthValueSpec::continuous(), true, 1);
  cfg.distinct_thresholds = true;
  const auto f = sample_formula(cfg);
  std::set<Threshold> sides;
  for (const auto &c : f.clauses())
    for (const auto &l : c.literals) {
      EXPECT_TRUE(sides.insert(l.encoded_side()).second);
    }
  cfg.vspec = TruthValueSpec::finite(3);
  EXPECT_EQ(code_of([&] { sample_formula(cfg); }), ErrorCode::InvalidConfig);
}

TEST(SampleFormula, OccurrenceLawOfTwoSlots) {
  // km = 2 slots over n = 2 variables: multinomial(2; 1/2, 1/2).
  const std::uint64_t draws = 100000;
  const auto f = sample_formula(config(2, 2, draws, TruthValueSpec::continuous(), false, 5));
  std::uint64_t r20 = 0, r11 = 0, r02 = 0;
  for (const auto &c : f.clauses()) {
    const int ones = (c.literals[0].variable == 1) + (c.literals[1].variable == 1);
    (ones == 2 ? r20 : ones == 1 ? r11 : r02)++;
  }
  expect_within_3sigma(r20, draws, 0.25);
  expect_within_3sigma(r11, draws, 0.5);
  expect_within_3sigma(r02, draws, 0.25);
}

TEST(SampleFormula, ModelFMatchesModelFPrimeConditionedOnDistinctVariables) {
  // k = 2, n = 3, m = 1: six ordered variable pairs, each 1/6 under F and
  // under F' given distinct variables.
  const std::uint64_t draws = 60000;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> f_counts, fp_counts;
  std::uint64_t fp_kept = 0;
  const auto f = sample_formula(config(2, 3, draws, TruthValueSpec::continuous(), true, 10));
  const auto fp = sample_formula(config(2, 3, draws, TruthValueSpec::continuous(), false, 11));
  for (const auto &c : f.clauses())
    ++f_counts[{c.literals[0].variable, c.literals[1].variable}];
  for (const auto &c : fp.clauses())
    if (c.literals[0].variable != c.literals[1].variable) {
      ++fp_counts[{c.literals[0].variable, c.literals[1].variable}];
      ++fp_kept;
    }
  expect_within_3sigma(fp_kept, draws, 6.0 / 9.0);
  ASSERT_EQ(f_counts.size(), 6u);
  ASSERT_EQ(fp_counts.size(), 6u);
  for (const auto &[pair, count] : f_counts) {
    expect_within_3sigma(count, draws, 1.0 / 6.0);
    expect_within_3sigma(fp_counts[pair], fp_kept, 1.0 / 6.0);
  }
}

TEST(SampleOccurrenceProfile, SumsToSlots) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto r = sample_occurrence_profile(7, 33, rng);
    EXPECT_EQ(r.counts.size(), 7u);
    EXPECT_EQ(r.total(), 33u);
  }
}

TEST(SampleGivenProfile, AllSlotsOnOneVariable) {
  const auto cfg = config(3, 4, 5, TruthValueSpec::continuous(), false, 0);
  const OccurrenceProfile r{{15, 0, 0, 0}};
  const auto f = sample_formula_given_profile(cfg, r, 12);
  for (const auto &c : f.clauses())
    for (const auto &l : c.literals) {
      EXPECT_EQ(l.variable, 1u);
    }
}

TEST(SampleGivenProfile, ReproducesProfileProperty) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const unsigned k = 1 + static_cast<unsigned>(rng.below(3));
    const auto n = static_cast<std::uint32_t>(1 + rng.below(8));
    const std::uint64_t m = rng.below(12);
    const auto cfg = config(k, n, m, TruthValueSpec::finite(4), false, 0);
    const auto r = sample_occurrence_profile(n, k * m, rng);
    const auto f = sample_formula_given_profile(cfg, r, rng.next());
    EXPECT_EQ(occurrence_profile(f), r);
  }
}

TEST(SampleGivenProfile, Errors) {
  auto cfg = config(2, 3, 2, TruthValueSpec::continuous(), false, 0);
  EXPECT_EQ(code_of([&] { sample_formula_given_profile(cfg, {{1, 1, 1}}, 0); }),
            ErrorCode::ProfileMismatch);
  EXPECT_EQ(code_of([&] { sample_formula_given_profile(cfg, {{4, 0}}, 0); }),
            ErrorCode::ProfileMismatch);
  cfg.distinct_vars_per_clause = true;
  EXPECT_EQ(code_of([&] { sample_formula_given_profile(cfg, {{2, 1, 1}}, 0); }),
            ErrorCode::InvalidConfig);
}

TEST(CoupleIncreaseV, RequiresFiniteSet) {
  const auto f = sample_formula(config(2, 4, 4, TruthValueSpec::continuous(), true, 0));
  EXPECT_EQ(code_of([&] { couple_increase_v(f, 0); }), ErrorCode::WrongVspec);
}

TEST(CoupleIncreaseV, SameShapeAndEncodedSidesMoveUp) {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t v = 2 + rng.below(6);
    const auto f = sample_formula(config(2, 6, 12, TruthValueSpec::finite(v), true, rng.next()));
    const auto pair = couple_increase_v(f, rng.next());
    EXPECT_EQ(pair.low, f);
    EXPECT_EQ(pair.high.vspec(), TruthValueSpec::finite(v + 1));
    ASSERT_EQ(pair.high.m(), f.m());
    for (std::size_t c = 0; c < f.m(); ++c)
      for (std::size_t i = 0; i < 2; ++i) {
        const auto &lo = f.clause(c).literals[i];
        const auto &hi = pair.high.clause(c).literals[i];
        EXPECT_EQ(lo.variable, hi.variable);
        EXPECT_EQ(lo.relation, hi.relation);
        // Encoded u/(v-1) becomes u/v or (u+1)/v.
        const std::uint64_t u = lo.encoded_side().numerator() * ((v - 1) / lo.encoded_side().denominator());
        const auto side = hi.encoded_side();
        EXPECT_TRUE(side == Threshold(u, v) || side == Threshold(u + 1, v));
        // LE literals: {x <= u/(v-1)} scaled by (v-1)/v lies inside {x <= side}.
        if (lo.relation == Relation::LE) {
          EXPECT_LE(Threshold(u, v), hi.bound);
        }
      }
  }
}

TEST(CoupleIncreaseV, BumpMarginalFromTwoValues) {
  // v = 2: encoded side 0 is bumped to 1/2 with probability 1/2.
  const std::uint64_t draws = 100000;
  const auto f = sample_formula(config(1, 1, draws, TruthValueSpec::finite(2), true, 1));
  const auto high = couple_increase_v(f, 2).high;
  std::uint64_t half = 0;
  for (const auto &c : high.clauses())
    half += c.literals[0].encoded_side() == Threshold(1, 2);
  expect_within_3sigma(half, draws, 0.5);
}

TEST(CoupleIncreaseV, BumpMarginalFromThreeValues) {
  // Side 0 stays at 0 w.p. 2/3 else 1/3; side 1/2 goes to 1/3 w.p. 1/3
  // else 2/3. P(0) = P(1/3) = P(2/3) = 1/3.
  const std::uint64_t draws = 100000;
  const auto f = sample_formula(config(1, 1, draws, TruthValueSpec::finite(3), true, 3));
  const auto high = couple_increase_v(f, 4).high;
  std::map<Threshold, std::uint64_t> counts;
  for (const auto &c : high.clauses())
    ++counts[c.literals[0].encoded_side()];
  ASSERT_EQ(counts.size(), 3u);
  for (std::uint64_t u = 0; u < 3; ++u)
    expect_within_3sigma(counts[Threshold(u, 3)], draws, 1.0 / 3.0);
}

TEST(CoupleIncreaseV, PreservesSatisfiabilityForTwoValues) {
  // v = 2 -> 3 only weakens literals, so SAT(low) implies SAT(high).
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    const auto f = sample_formula(config(2, 6, 9, TruthValueSpec::finite(2), true, rng.next()));
    const auto pair = couple_increase_v(f, rng.next());
    if (oracle::sat_by_truth_table(pair.low)) {
      EXPECT_TRUE(oracle::sat_by_truth_table(pair.high));
    }
  }
}

TEST(CoupleIncreaseV, UnbumpedReflectedLiteralsCanLoseSatisfiability) {
  // Over Finite(3): x <= 1/2 and x >= 1/2 hold together at x = 1/2. Rescaled
  // without bumps they become x <= 1/3 and x >= 2/3, which no value meets.
  const auto low = testutil::formula(1, 1, {{le(1, 1, 2)}, {ge(1, 1, 2)}},
                                     TruthValueSpec::finite(3), true);
  ASSERT_TRUE(oracle::sat_by_truth_table(low));
  std::uint64_t lost = 0;
  const std::uint64_t trials = 2000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const auto high = couple_increase_v(low, seed).high;
    lost += !oracle::sat_by_truth_table(high);
  }
  // Both sides 1/2 -> 1/3 unbumped, probability (1 - 2/3)^2 = 1/9.
  expect_within_3sigma(lost, trials, 1.0 / 9.0);
}

TEST(TruncateThresholds, Examples) {
  const auto f = le_sides({Threshold(5, 8), Threshold(3, 4)});
  const auto t2 = truncate_thresholds(f, 2);
  EXPECT_EQ(t2.vspec(), TruthValueSpec::dyadic(2));
  EXPECT_EQ(t2.clause(0).literals[0].bound, Threshold(1, 2));
  EXPECT_EQ(t2.clause(1).literals[0].bound, Threshold(3, 4));

  const auto g = sample_formula(config(2, 5, 20, TruthValueSpec::continuous(), true, 6));
  const auto t0 = truncate_thresholds(g, 0);
  for (const auto &c : t0.clauses())
    for (const auto &l : c.literals) {
      EXPECT_EQ(l.encoded_side(), Threshold::zero());
    }
}

TEST(TruncateThresholds, NestedTruncationsOnlyStrengthenProperty) {
  // Truncating encoded sides lowers every LE bound and raises every GE bound,
  // so satisfiability can only be lost as lambda decreases.
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const auto f = sample_formula(config(2, 5, 6 + rng.below(6), TruthValueSpec::continuous(),
                                         rng.coin(), rng.next()));
    bool previous = false;
    for (unsigned lambda = 0; lambda <= 8; ++lambda) {
      const bool sat = oracle::sat_by_lowered_candidates(truncate_thresholds(f, lambda));
      if (previous) {
        EXPECT_TRUE(sat) << "lambda " << lambda;
      }
      previous = sat;
    }
    if (previous) {
      EXPECT_TRUE(oracle::sat_by_lowered_candidates(f));
    }
  }
}

TEST(MinSafeLambda, Examples) {
  EXPECT_EQ(min_safe_lambda(le_sides({Threshold(1, 4), Threshold(3, 4)})), 1u);
  EXPECT_EQ(min_safe_lambda(le_sides({Threshold(10, 16), Threshold(11, 16)})), 4u);
  // 0.011 and 0.0101 share the digits 0.01 and differ at the third.
  EXPECT_EQ(min_safe_lambda(le_sides({Threshold(3, 8), Threshold(5, 16)})), 3u);
  EXPECT_EQ(min_safe_lambda(le_sides({Threshold(1, 3)})), 0u);
  EXPECT_EQ(code_of([] { min_safe_lambda(le_sides({Threshold(1, 3), Threshold(1, 3)})); }),
            ErrorCode::DuplicateThresholds);
}

TEST(MinSafeLambda, IsSmallestOrderPreservingPrecisionProperty) {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    auto cfg = config(2, 6, 1 + rng.below(10), TruthValueSpec::continuous(), true, rng.next());
    cfg.distinct_thresholds = true;
    const auto f = sample_formula(cfg);
    std::vector<Threshold> sides;
    for (const auto &c : f.clauses())
      for (const auto &l : c.literals)
        sides.push_back(l.encoded_side());
    const unsigned lambda = min_safe_lambda(f);
    // Independent definition: smallest lambda with pairwise distinct prefixes.
    auto distinct_at = [&](unsigned bits) {
      std::set<std::uint64_t> seen;
      for (const auto &s : sides)
        if (!seen.insert(s.binary_prefix(bits)).second)
          return false;
      return true;
    };
    EXPECT_TRUE(distinct_at(lambda));
    ASSERT_GE(lambda, 1u);
    EXPECT_FALSE(distinct_at(lambda - 1));
    // Strict order of sides survives truncation at lambda.
    for (const auto &a : sides)
      for (const auto &b : sides)
        if (a < b) {
          EXPECT_LT(a.truncated(lambda), b.truncated(lambda));
        }
  }
}
