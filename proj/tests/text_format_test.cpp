#include <string>

#include <gtest/gtest.h>

#include "planted.hpp"
#include "rsat/certificates.hpp"
#include "rsat/sampler.hpp"
#include "rsat/text_format.hpp"
#include "test_util.hpp"

using namespace rsat;
using testutil::code_of;
using testutil::ge;
using testutil::le;

namespace {

std::string parse_message(const std::string &text) {
  try {
    parse_formula(text);
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "parsed: " << text;
  return {};
}

bool mentions(const std::string &msg, const std::string &part) {
  return msg.find(part) != std::string::npos;
}

} // namespace

TEST(FormulaText, RendersExactLayout) {
  const auto f = testutil::formula(2, 3, {{le(1, 3, 10), ge(3, 7, 10)}, {ge(2, 1, 2), le(2, 1, 4)}});
  EXPECT_EQ(render_formula(f), "p rsat 2 3 2 continuous\n"
                               "c model F'\n"
                               "1:le:3/10 3:ge:7/10\n"
                               "2:ge:1/2 2:le:1/4\n");
}

TEST(FormulaText, RoundTripProperty) {
  const std::vector<TruthValueSpec> specs{TruthValueSpec::finite(2), TruthValueSpec::finite(7),
                                          TruthValueSpec::dyadic(0), TruthValueSpec::dyadic(5),
                                          TruthValueSpec::continuous()};
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    GenConfig cfg;
    cfg.k = 1 + static_cast<unsigned>(rng.below(4));
    cfg.n = 4 + static_cast<std::uint32_t>(rng.below(10));
    cfg.m = rng.below(30);
    cfg.vspec = specs[rng.below(specs.size())];
    cfg.distinct_vars_per_clause = rng.coin();
    cfg.seed = rng.next();
    const auto f = sample_formula(cfg);
    const auto text = render_formula(f);
    const auto g = parse_formula(text);
    EXPECT_EQ(g, f);
    EXPECT_EQ(render_formula(g), text);
  }
}

TEST(FormulaText, CommentsBlankLinesAndDefaultModel) {
  const auto f = parse_formula("c leading comment\n"
                               "p rsat 2 2 1 finite:3\n"
                               "\n"
                               "c\n"
                               "1:le:1/2 1:ge:1/2\n");
  EXPECT_EQ(f.m(), 1u);
  EXPECT_FALSE(f.distinct_vars_per_clause());
  EXPECT_EQ(f.vspec(), TruthValueSpec::finite(3));
}

TEST(FormulaText, Diagnostics) {
  const std::string header = "p rsat 2 3 1 continuous\n";

  auto msg = parse_message(header + "1:le:1/1 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "line 2")) << msg;
  EXPECT_TRUE(mentions(msg, "'1:le:1/1'")) << msg;
  EXPECT_TRUE(mentions(msg, "innocuous")) << msg;

  msg = parse_message(header + "1:ge:0/1 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "'1:ge:0/1'")) << msg;

  msg = parse_message(header + "4:le:1/2 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "line 2")) << msg;
  EXPECT_TRUE(mentions(msg, "'4:le:1/2'")) << msg;

  msg = parse_message(header + "1:le:2/4 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "'1:le:2/4'")) << msg;
  EXPECT_TRUE(mentions(msg, "lowest terms")) << msg;

  msg = parse_message(header + "1:le:1/2\n");
  EXPECT_TRUE(mentions(msg, "line 2")) << msg;
  EXPECT_TRUE(mentions(msg, "expected 2 literals")) << msg;

  msg = parse_message("p rsat 2 3 1 finite:3\n1:le:1/3 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "'1:le:1/3'")) << msg;
  EXPECT_TRUE(mentions(msg, "not in")) << msg;

  msg = parse_message(header + "1:le:1/2 2:ge:1/2\n1:le:1/2 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "line 3")) << msg;

  msg = parse_message("p rsat 2 3 2 continuous\n1:le:1/2 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "expected 2 clauses, found 1")) << msg;

  msg = parse_message("p cnf 3 1\n");
  EXPECT_TRUE(mentions(msg, "line 1")) << msg;
  EXPECT_TRUE(mentions(msg, "header")) << msg;

  msg = parse_message("p rsat 2 3 0 finite:1\n");
  EXPECT_TRUE(mentions(msg, "'finite:1'")) << msg;

  msg = parse_message(header + "1:lt:1/2 2:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "'1:lt:1/2'")) << msg;

  msg = parse_message("p rsat 2 3 1 continuous\nc model F\n1:le:1/2 1:ge:1/2\n");
  EXPECT_TRUE(mentions(msg, "line 3")) << msg;
  EXPECT_TRUE(mentions(msg, "repeated")) << msg;

  msg = parse_message("");
  EXPECT_TRUE(mentions(msg, "missing header")) << msg;
}

TEST(CertificateText, BicycleRoundTrip) {
  Bicycle b;
  b.ell = 2;
  b.i0 = 2;
  b.i1 = 1;
  b.literals = {le(2, 3, 10), ge(1, 7, 10), le(1, 3, 10), ge(2, 7, 10), le(2, 3, 10), le(1, 3, 10)};
  b.clause_indices = {0, 1, 2};
  const auto text = render_certificate(b);
  EXPECT_EQ(text, "cert bicycle 2 2 1\n"
                  "0 2:le:3/10 1:ge:7/10\n"
                  "1 1:le:3/10 2:ge:7/10\n"
                  "2 2:le:3/10 1:le:3/10\n");
  const auto back = parse_certificate(text);
  ASSERT_TRUE(std::holds_alternative<Bicycle>(back));
  EXPECT_EQ(std::get<Bicycle>(back), b);
}

TEST(CertificateText, SnakeRoundTripProperty) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto [f, s] = planted::formula_with_snake(seed, 25, 10, 6 + 2 * (seed % 3));
    const auto text = render_certificate(s);
    const auto back = parse_certificate(text);
    ASSERT_TRUE(std::holds_alternative<Snake>(back));
    EXPECT_EQ(std::get<Snake>(back), s);
    EXPECT_TRUE(verify_snake(f, std::get<Snake>(back)));
    EXPECT_EQ(render_certificate(back), text);
  }
}

TEST(CertificateText, Diagnostics) {
  EXPECT_EQ(code_of([] { parse_certificate("cert tricycle 2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_certificate("cert snake 2\n0 1:le:1/2 2:ge:1/2\n"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_certificate("cert bicycle 1 2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] {
              parse_certificate("cert snake 0\n0 1:le:1/2 1:ge:1/2\n0 1:le:1/2 1:ge:1/2\n");
            }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_certificate("cert snake 0\nx 1:le:1/2 1:ge:1/2\n"); }),
            ErrorCode::ParseError);
}
