#pragma once

// Command-line front end. Exit codes: 0 ok, 1 usage, 2 I/O or parse error,
// 3 resource limit.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsat/analytics.hpp"
#include "rsat/certificates.hpp"
#include "rsat/error.hpp"
#include "rsat/sampler.hpp"
#include "rsat/solver.hpp"
#include "rsat/sweep.hpp"
#include "rsat/text_format.hpp"

namespace rsat {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitLimit = 3 };

/// Published reference values for k = 3 and k = 2, shown next to the
/// computed roots.
inline constexpr double kReferenceRootK3 = 36.1;
inline constexpr double kReferenceRootK2 = 12.664;

namespace cli_detail {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline TruthValueSpec parse_vspec_arg(const std::string &s) {
  if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos)
    return TruthValueSpec::finite(std::stoull(s));
  try {
    return detail::parse_vspec(0, s);
  } catch (const Error &) {
    throw Error(ErrorCode::InvalidConfig,
                "bad truth-value set '" + s + "' (finite:<v>, dyadic:<l>, continuous)");
  }
}

inline bool parse_model(const std::string &s) {
  if (s == "F")
    return true;
  if (s == "F'")
    return false;
  throw Error(ErrorCode::InvalidConfig, "model must be F or F'");
}

inline Decider parse_decider(const std::string &s) {
  if (s == "auto")
    return Decider::Auto;
  if (s == "scc")
    return Decider::Scc;
  if (s == "complete")
    return Decider::Complete;
  throw Error(ErrorCode::InvalidConfig, "decider must be auto, scc or complete");
}

inline std::string read_input(const std::string &path, bool use_stdin, std::istream &in) {
  std::ostringstream buf;
  if (use_stdin || path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  if (path.empty())
    throw Error(ErrorCode::InvalidConfig, "no input file (give a path or --stdin)");
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw IoError("cannot open '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

/// Writes to --out when given, else to `out`.
class Sink {
public:
  Sink(const std::string &path, std::ostream &out) : out_(&out) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_)
        throw IoError("cannot write '" + path + "'");
      out_ = &file_;
    }
  }
  std::ostream &stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream *out_;
};

inline std::string witness_line(const Interpretation &w) {
  std::string s = "v";
  for (std::uint32_t v = 1; v <= w.size(); ++v)
    s += " " + std::to_string(v) + "=" + w.get(v)->to_string();
  return s;
}

} // namespace cli_detail

inline int cli_main(int argc, const char *const *argv, std::istream &in, std::ostream &out,
                    std::ostream &err) {
  using namespace cli_detail;
  CLI::App app{"Regular signed k-SAT: sampling, deciding, certificates, sweeps"};
  app.name("rsat");
  app.require_subcommand(1);
  std::string out_path;

  // gen
  auto *gen = app.add_subcommand("gen", "sample a random formula");
  unsigned g_k = 2;
  std::uint32_t g_n = 10;
  std::uint64_t g_m = 0, g_seed = 0;
  std::string g_c, g_v = "continuous", g_model = "F";
  gen->add_option("--k", g_k, "literals per clause")->capture_default_str();
  gen->add_option("--n", g_n, "number of variables")->capture_default_str();
  auto *g_m_opt = gen->add_option("--m", g_m, "number of clauses");
  gen->add_option("--c", g_c, "clause density; m = round(c n)")->excludes(g_m_opt);
  gen->add_option("--v", g_v, "truth-value set")->capture_default_str();
  gen->add_option("--seed", g_seed, "seed")->capture_default_str();
  gen->add_option("--model", g_model, "F (distinct variables per clause) or F'")
      ->capture_default_str();
  gen->add_option("--out", out_path, "output file");

  // solve
  auto *solve_cmd = app.add_subcommand("solve", "decide a formula");
  std::string s_file, s_decider = "auto";
  bool s_stdin = false;
  std::uint64_t s_budget = SolverOptions{}.node_budget;
  solve_cmd->add_option("file", s_file, "formula file");
  solve_cmd->add_flag("--stdin", s_stdin, "read the formula from standard input");
  solve_cmd->add_option("--decider", s_decider, "auto, scc or complete")->capture_default_str();
  solve_cmd->add_option("--budget", s_budget, "search node budget")->capture_default_str();
  solve_cmd->add_option("--out", out_path, "output file");

  // cert
  auto *cert = app.add_subcommand("cert", "find or verify bicycles and snakes");
  cert->require_subcommand(1);
  auto *find = cert->add_subcommand("find", "search a formula for a certificate");
  std::string c_type = "bicycle", c_file, c_cert;
  bool c_stdin = false;
  std::uint64_t c_budget = 0;
  find->add_option("--type", c_type, "bicycle or snake")->capture_default_str();
  find->add_option("file", c_file, "formula file");
  find->add_flag("--stdin", c_stdin, "read the formula from standard input");
  find->add_option("--budget", c_budget, "search step budget (0 = default)");
  find->add_option("--out", out_path, "output file");
  auto *verify = cert->add_subcommand("verify", "check a certificate against a formula");
  verify->add_option("formula", c_file, "formula file")->required();
  verify->add_option("certificate", c_cert, "certificate file")->required();

  // sweep
  auto *sweep = app.add_subcommand("sweep", "Monte Carlo satisfiability sweep to CSV");
  SweepConfig sc;
  std::vector<std::string> w_v{"continuous"}, w_c;
  std::string w_decider = "auto", w_model = "F";
  bool w_crossing = false;
  sweep->add_option("--k", sc.k, "literals per clause")->capture_default_str();
  sweep->add_option("--v", w_v, "truth-value sets")->capture_default_str();
  sweep->add_option("--n", sc.n_values, "variable counts")->required();
  sweep->add_option("--c", w_c, "clause densities (decimal or p/q)")->required();
  sweep->add_option("--trials", sc.trials, "trials per cell")->capture_default_str();
  sweep->add_option("--seed", sc.master_seed, "master seed")->capture_default_str();
  sweep->add_option("--decider", w_decider, "auto, scc or complete")->capture_default_str();
  sweep->add_option("--budget", sc.budget, "node budget per trial")->capture_default_str();
  sweep->add_option("--model", w_model, "F or F'")->capture_default_str();
  sweep->add_option("--threads", sc.threads, "worker threads (0 = all cores)");
  sweep->add_flag("--crossing", w_crossing, "report the p = 1/2 crossing of each slice");
  sweep->add_option("--out", out_path, "CSV file; limits go to <out>.limits.csv");

  // bounds
  auto *bounds = app.add_subcommand("bounds", "closed-form bound tables");
  unsigned b_k = 3;
  std::vector<double> b_c;
  std::vector<std::uint64_t> b_v;
  bounds->add_option("--k", b_k, "literals per clause")->capture_default_str();
  bounds->add_option("--c", b_c, "densities at which to evaluate k c (1-2^-k)^(c-1)");
  bounds->add_option("--v", b_v, "|V| values for log_{8/7} v");
  bounds->add_option("--out", out_path, "output file");

  // moments
  auto *moments = app.add_subcommand("moments", "factorial moments of the occurrence profile");
  std::uint64_t o_n = 10, o_m = 20, o_samples = 100000, o_seed = 0;
  unsigned o_k = 2;
  std::vector<std::uint64_t> o_d;
  moments->add_option("--n", o_n, "variables")->capture_default_str();
  moments->add_option("--m", o_m, "clauses")->capture_default_str();
  moments->add_option("--k", o_k, "literals per clause")->capture_default_str();
  moments->add_option("--d", o_d, "d_1 d_2 ... (missing entries are 0)")->required();
  moments->add_option("--samples", o_samples, "Monte Carlo samples")->capture_default_str();
  moments->add_option("--seed", o_seed, "seed")->capture_default_str();
  moments->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      GenConfig cfg;
      cfg.k = g_k;
      cfg.n = g_n;
      cfg.m = g_c.empty() ? g_m : Ratio::parse(g_c).clauses_for(g_n);
      cfg.vspec = parse_vspec_arg(g_v);
      cfg.seed = g_seed;
      cfg.distinct_vars_per_clause = parse_model(g_model);
      const Formula f = sample_formula(cfg);
      Sink sink(out_path, out);
      sink.stream() << render_formula(f);
      return kExitOk;
    }

    if (*solve_cmd) {
      const Formula f = parse_formula(read_input(s_file, s_stdin, in));
      const SolveResult r = solve(f, parse_decider(s_decider), SolverOptions{s_budget});
      Sink sink(out_path, out);
      if (r.sat())
        sink.stream() << "SAT\n" << witness_line(*r.witness) << '\n';
      else
        sink.stream() << "UNSAT\n";
      return kExitOk;
    }

    if (*find) {
      const Formula f = parse_formula(read_input(c_file, c_stdin, in));
      SearchStatus status;
      std::optional<Certificate> found;
      if (c_type == "bicycle") {
        auto r = c_budget ? find_bicycle(f, c_budget) : find_bicycle(f);
        status = r.status;
        if (r.certificate)
          found = *r.certificate;
      } else if (c_type == "snake") {
        auto r = c_budget ? find_snake(f, c_budget) : find_snake(f);
        status = r.status;
        if (r.certificate)
          found = *r.certificate;
      } else {
        throw Error(ErrorCode::InvalidConfig, "--type must be bicycle or snake");
      }
      if (status == SearchStatus::BudgetExhausted) {
        err << "search budget exhausted\n";
        return kExitLimit;
      }
      Sink sink(out_path, out);
      if (found)
        sink.stream() << render_certificate(*found);
      else
        sink.stream() << "NONE\n";
      return kExitOk;
    }

    if (*verify) {
      const Formula f = parse_formula(read_input(c_file, false, in));
      const Certificate c = parse_certificate(read_input(c_cert, false, in));
      const bool ok = std::holds_alternative<Bicycle>(c)
                          ? verify_bicycle(f, std::get<Bicycle>(c))
                          : verify_snake(f, std::get<Snake>(c));
      out << (ok ? "VALID" : "INVALID") << '\n';
      return kExitOk;
    }

    if (*sweep) {
      for (const auto &v : w_v)
        sc.vspecs.push_back(parse_vspec_arg(v));
      for (const auto &c : w_c)
        sc.c_grid.push_back(Ratio::parse(c));
      sc.decider = parse_decider(w_decider);
      sc.distinct_vars_per_clause = parse_model(w_model);
      const auto results = run_sweep(sc);
      {
        Sink sink(out_path, out);
        write_sweep_csv(sink.stream(), results);
      }
      bool any_limited = false;
      for (const auto &r : results)
        any_limited |= r.limited > 0;
      if (!out_path.empty()) {
        Sink limits(out_path + ".limits.csv", out);
        write_limits_csv(limits.stream(), results);
      } else if (any_limited) {
        write_limits_csv(err, results);
      }
      for (const auto &r : results)
        if (r.flagged())
          err << "warning: " << r.limited << " of " << (r.trials + r.limited)
              << " trials hit the resource limit at v=" << r.vspec.to_string() << " n=" << r.n
              << " c=" << r.c.to_string() << '\n';
      if (w_crossing) {
        for (const auto &vspec : sc.vspecs)
          for (auto n : sc.n_values) {
            std::vector<SweepResult> slice;
            for (const auto &r : results)
              if (r.vspec == vspec && r.n == n)
                slice.push_back(r);
            err << "crossing v=" << vspec.to_string() << " n=" << n << ": ";
            try {
              err << format_fixed(estimate_crossing(slice), 4) << '\n';
            } catch (const Error &e) {
              if (e.code() != ErrorCode::NoCrossing)
                throw;
              err << "none\n";
            }
          }
      }
      return kExitOk;
    }

    if (*bounds) {
      Sink sink(out_path, out);
      auto &os = sink.stream();
      const double root = static_cast<double>(thm1_root(b_k));
      os << "k " << b_k << '\n';
      os << "thm1_root " << format_fixed(root, 6) << '\n';
      if (b_k == 3)
        os << "reference " << format_fixed(kReferenceRootK3, 1) << '\n';
      if (b_k == 2)
        os << "reference " << format_fixed(kReferenceRootK2, 3) << " (printed value; differs)\n";
      for (double c : b_c) {
        const auto rep = thm1_report(b_k, c);
        os << "thm1_value c=" << format_fixed(c, 4) << ' '
           << format_fixed(static_cast<double>(rep.value), 6)
           << (rep.below_one ? " below 1" : " not below 1") << '\n';
      }
      for (auto v : b_v)
        os << "bejar_bound v=" << v << ' ' << format_fixed(static_cast<double>(bejar_bound(v)), 6)
           << '\n';
      return kExitOk;
    }

    if (*moments) {
      if (o_n == 0 || o_n > UINT32_MAX)
        throw Error(ErrorCode::InvalidConfig, "n out of range");
      if (o_d.size() > o_n)
        throw Error(ErrorCode::InvalidConfig, "more d entries than variables");
      std::vector<std::uint64_t> d(o_n, 0);
      std::copy(o_d.begin(), o_d.end(), d.begin());
      std::uint64_t total = 0;
      for (auto x : d)
        total += x;
      const BigRational exact = exact_factorial_moment(o_n, o_m, o_k, d);
      const BigRational bound = factorial_moment_bound(o_n, o_m, o_k, total);
      Rng rng(o_seed);
      double sum = 0, sum_sq = 0;
      for (std::uint64_t s = 0; s < o_samples; ++s) {
        const auto r = sample_occurrence_profile(static_cast<std::uint32_t>(o_n), o_k * o_m, rng);
        double prod = 1;
        for (std::size_t j = 0; j < o_d.size(); ++j)
          prod *= static_cast<double>(falling_factorial(r.counts[j], d[j]));
        sum += prod;
        sum_sq += prod * prod;
      }
      const double count = static_cast<double>(o_samples);
      const double mean = sum / count;
      const double se = std::sqrt(std::max(0.0, sum_sq / count - mean * mean) / count);
      Sink sink(out_path, out);
      auto &os = sink.stream();
      os << "D " << total << '\n';
      os << "exact " << exact.str() << " = " << format_fixed(exact.convert_to<double>(), 9) << '\n';
      os << "bound " << bound.str() << " = " << format_fixed(bound.convert_to<double>(), 9) << '\n';
      os << "monte_carlo " << format_fixed(mean, 9) << " se " << format_fixed(se, 9) << '\n';
      return kExitOk;
    }
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
    case ErrorCode::ParseError: return kExitIo;
    case ErrorCode::ResourceLimit: return kExitLimit;
    default: return kExitUsage;
    }
  }
  return kExitUsage;
}

} // namespace rsat
