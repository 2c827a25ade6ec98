#pragma once

// Text formats.
//
// Formula:
//   p rsat <k> <n> <m> <vspec>        vspec: finite:<v> | dyadic:<lambda> | continuous
//   c model F                         optional; F = distinct variables per clause, F' = repeats
//   c <anything>                      comment
//   <var>:<le|ge>:<num>/<den> ...     one clause per line, exactly k tokens, m lines
//
// Certificates (clause indices are 0-based positions among the clause lines):
//   cert bicycle <ell> <i0> <i1>
//   <clause> <w^f_i> <w^t_{i+1}>      ell + 1 lines, i = 0..ell
//
//   cert snake <ell>
//   <clause> <left_i> <right_{i+1}>   ell + 1 lines, i = 0..ell

#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rsat/certificates.hpp"
#include "rsat/error.hpp"
#include "rsat/formula.hpp"

namespace rsat {

using Certificate = std::variant<Bicycle, Snake>;

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, std::string_view token,
                                    const std::string &reason) {
  std::string msg = "line " + std::to_string(line);
  if (!token.empty())
    msg += ": token '" + std::string(token) + "'";
  throw Error(ErrorCode::ParseError, msg + ": " + reason);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_u64(std::string_view s, std::uint64_t &out) {
  if (s.empty() || s.size() > 20)
    return false;
  for (char ch : s)
    if (ch < '0' || ch > '9')
      return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

inline std::uint64_t expect_u64(std::size_t line, std::string_view tok, const char *what) {
  std::uint64_t v = 0;
  if (!parse_u64(tok, v))
    parse_fail(line, tok, std::string("expected ") + what);
  return v;
}

inline TruthValueSpec parse_vspec(std::size_t line, std::string_view tok) {
  if (tok == "continuous")
    return TruthValueSpec::continuous();
  const auto colon = tok.find(':');
  if (colon == std::string_view::npos)
    parse_fail(line, tok, "unknown truth-value set");
  const auto kind = tok.substr(0, colon);
  std::uint64_t param = 0;
  if (!parse_u64(tok.substr(colon + 1), param))
    parse_fail(line, tok, "truth-value set parameter is not an integer");
  if (kind == "finite") {
    if (param < 2)
      parse_fail(line, tok, "finite truth-value set needs v >= 2");
    return TruthValueSpec::finite(param);
  }
  if (kind == "dyadic") {
    if (param > TruthValueSpec::kMaxDyadicBits)
      parse_fail(line, tok, "dyadic precision above 62 bits");
    return TruthValueSpec::dyadic(static_cast<unsigned>(param));
  }
  parse_fail(line, tok, "unknown truth-value set");
}

/// `<var>:<le|ge>:<num>/<den>` with syntax checks only (no n or V context).
inline Literal parse_literal_token(std::size_t line, std::string_view tok) {
  const auto c1 = tok.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : tok.find(':', c1 + 1);
  if (c2 == std::string_view::npos)
    parse_fail(line, tok, "expected <var>:<le|ge>:<num>/<den>");
  const auto var_s = tok.substr(0, c1);
  const auto rel_s = tok.substr(c1 + 1, c2 - c1 - 1);
  const auto frac = tok.substr(c2 + 1);
  std::uint64_t var = 0;
  if (!parse_u64(var_s, var) || var == 0 || var > UINT32_MAX)
    parse_fail(line, tok, "variable index must be a positive integer");
  Relation rel;
  if (rel_s == "le")
    rel = Relation::LE;
  else if (rel_s == "ge")
    rel = Relation::GE;
  else
    parse_fail(line, tok, "relation must be 'le' or 'ge'");
  const auto slash = frac.find('/');
  std::uint64_t num = 0, den = 0;
  if (slash == std::string_view::npos || !parse_u64(frac.substr(0, slash), num) ||
      !parse_u64(frac.substr(slash + 1), den))
    parse_fail(line, tok, "bound must be <num>/<den>");
  if (den == 0)
    parse_fail(line, tok, "zero denominator");
  if (num > den)
    parse_fail(line, tok, "bound exceeds 1");
  if (!Threshold::is_reduced(num, den))
    parse_fail(line, tok, "fraction is not in lowest terms");
  return Literal{static_cast<std::uint32_t>(var), rel, Threshold(num, den)};
}

inline std::string literal_token(const Literal &l) {
  return std::to_string(l.variable) + (l.relation == Relation::LE ? ":le:" : ":ge:") +
         l.bound.to_string();
}

struct LineReader {
  std::istream &in;
  std::size_t number = 0;

  bool next(std::string &line) {
    if (!std::getline(in, line))
      return false;
    ++number;
    return true;
  }
};

inline bool is_comment(std::string_view line) {
  return line == "c" || line.starts_with("c ");
}

inline bool is_blank(std::string_view line) { return split_ws(line).empty(); }

} // namespace detail

inline std::string render_formula(const Formula &f) {
  std::ostringstream os;
  os << "p rsat " << f.k() << ' ' << f.n() << ' ' << f.m() << ' ' << f.vspec().to_string()
     << '\n';
  os << "c model " << (f.distinct_vars_per_clause() ? "F" : "F'") << '\n';
  for (const auto &clause : f.clauses()) {
    for (std::size_t i = 0; i < clause.literals.size(); ++i)
      os << (i ? " " : "") << detail::literal_token(clause.literals[i]);
    os << '\n';
  }
  return os.str();
}

/// Parses and validates a formula; every failure is a ParseError naming the
/// line and, where applicable, the offending token.
inline Formula parse_formula(std::istream &in) {
  using namespace detail;
  LineReader reader{in};
  std::string line;
  bool have_header = false;
  unsigned k = 0;
  std::uint64_t n = 0, m = 0;
  TruthValueSpec vspec = TruthValueSpec::continuous();
  bool distinct = false;
  std::vector<Clause> clauses;

  while (reader.next(line)) {
    const std::size_t ln = reader.number;
    if (is_blank(line))
      continue;
    if (is_comment(line)) {
      const auto toks = split_ws(line);
      if (toks.size() >= 2 && toks[1] == "model") {
        if (!have_header || !clauses.empty())
          parse_fail(ln, "", "model line must follow the header and precede clauses");
        if (toks.size() != 3 || (toks[2] != "F" && toks[2] != "F'"))
          parse_fail(ln, toks.size() > 2 ? toks[2] : "", "model must be F or F'");
        distinct = toks[2] == "F";
      }
      continue;
    }
    const auto toks = split_ws(line);
    if (!have_header) {
      if (toks.size() != 6 || toks[0] != "p" || toks[1] != "rsat")
        parse_fail(ln, toks.empty() ? "" : toks[0],
                   "expected header 'p rsat <k> <n> <m> <vspec>'");
      const std::uint64_t kk = expect_u64(ln, toks[2], "clause width k");
      if (kk < 1 || kk > 1024)
        parse_fail(ln, toks[2], "k out of range");
      k = static_cast<unsigned>(kk);
      n = expect_u64(ln, toks[3], "variable count n");
      if (n < 1 || n > UINT32_MAX)
        parse_fail(ln, toks[3], "n out of range");
      m = expect_u64(ln, toks[4], "clause count m");
      vspec = parse_vspec(ln, toks[5]);
      have_header = true;
      continue;
    }
    if (clauses.size() == m)
      parse_fail(ln, toks[0], "more than m = " + std::to_string(m) + " clause lines");
    if (toks.size() != k)
      parse_fail(ln, "", "expected " + std::to_string(k) + " literals, found " +
                             std::to_string(toks.size()));
    Clause clause;
    for (auto tok : toks) {
      Literal lit = parse_literal_token(ln, tok);
      if (lit.variable > n)
        parse_fail(ln, tok, "variable index exceeds n = " + std::to_string(n));
      if (lit.is_innocuous())
        parse_fail(ln, tok, "innocuous literal (satisfied by every value)");
      if (!vspec.contains(lit.bound))
        parse_fail(ln, tok, "bound is not in " + vspec.to_string());
      if (distinct)
        for (const auto &prev : clause.literals)
          if (prev.variable == lit.variable)
            parse_fail(ln, tok, "variable repeated in a model F clause");
      clause.literals.push_back(lit);
    }
    clauses.push_back(std::move(clause));
  }
  if (!have_header)
    parse_fail(reader.number + 1, "", "missing header");
  if (clauses.size() != m)
    parse_fail(reader.number + 1, "",
               "expected " + std::to_string(m) + " clauses, found " +
                   std::to_string(clauses.size()));
  return Formula(k, static_cast<std::uint32_t>(n), std::move(clauses), vspec, distinct);
}

inline Formula parse_formula(const std::string &text) {
  std::istringstream in(text);
  return parse_formula(in);
}

inline std::string render_certificate(const Certificate &cert) {
  std::ostringstream os;
  if (const auto *b = std::get_if<Bicycle>(&cert)) {
    os << "cert bicycle " << b->ell << ' ' << b->i0 << ' ' << b->i1 << '\n';
    for (std::uint32_t i = 0; i <= b->ell; ++i)
      os << b->clause_indices.at(i) << ' ' << detail::literal_token(b->wf(i)) << ' '
         << detail::literal_token(b->wt(i + 1)) << '\n';
  } else {
    const auto &s = std::get<Snake>(cert);
    os << "cert snake " << s.ell << '\n';
    for (const auto &link : s.links)
      os << link.clause << ' ' << detail::literal_token(link.left) << ' '
         << detail::literal_token(link.right) << '\n';
  }
  return os.str();
}

inline Certificate parse_certificate(std::istream &in) {
  using namespace detail;
  LineReader reader{in};
  std::string line;
  std::vector<std::string_view> header;
  std::string header_line;
  while (reader.next(line)) {
    if (is_blank(line) || is_comment(line))
      continue;
    header_line = line;
    header = split_ws(header_line);
    break;
  }
  const std::size_t header_no = reader.number;
  if (header.size() < 3 || header[0] != "cert")
    parse_fail(header_no, header.empty() ? "" : header[0],
               "expected 'cert bicycle <ell> <i0> <i1>' or 'cert snake <ell>'");
  const bool bicycle = header[1] == "bicycle";
  if (!bicycle && header[1] != "snake")
    parse_fail(header_no, header[1], "unknown certificate type");
  if (header.size() != (bicycle ? 5u : 3u))
    parse_fail(header_no, "", "wrong number of header fields");
  const std::uint64_t ell = expect_u64(header_no, header[2], "length ell");
  if (ell > 1'000'000)
    parse_fail(header_no, header[2], "length too large");

  struct Row {
    std::uint64_t clause;
    Literal first, second;
  };
  std::vector<Row> rows;
  while (rows.size() < ell + 1 && reader.next(line)) {
    if (is_blank(line) || is_comment(line))
      continue;
    const auto toks = split_ws(line);
    if (toks.size() != 3)
      parse_fail(reader.number, "", "expected '<clause> <literal> <literal>'");
    rows.push_back({expect_u64(reader.number, toks[0], "clause index"),
                    parse_literal_token(reader.number, toks[1]),
                    parse_literal_token(reader.number, toks[2])});
  }
  if (rows.size() != ell + 1)
    parse_fail(reader.number + 1, "", "expected " + std::to_string(ell + 1) + " chain lines");
  while (reader.next(line))
    if (!is_blank(line) && !is_comment(line))
      parse_fail(reader.number, "", "trailing content after certificate");

  if (bicycle) {
    Bicycle b;
    b.ell = static_cast<std::uint32_t>(ell);
    b.i0 = static_cast<std::uint32_t>(expect_u64(header_no, header[3], "i0"));
    b.i1 = static_cast<std::uint32_t>(expect_u64(header_no, header[4], "i1"));
    for (const auto &row : rows) {
      b.clause_indices.push_back(row.clause);
      b.literals.push_back(row.first);
      b.literals.push_back(row.second);
    }
    return b;
  }
  Snake s;
  s.ell = static_cast<std::uint32_t>(ell);
  for (const auto &row : rows)
    s.links.push_back({row.clause, row.first, row.second});
  for (std::uint64_t i = 1; i <= ell; ++i)
    s.b.push_back(s.links[i].left.variable);
  return s;
}

inline Certificate parse_certificate(const std::string &text) {
  std::istringstream in(text);
  return parse_certificate(in);
}

} // namespace rsat
