#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "rsat/analytics.hpp"
#include "rsat/error.hpp"
#include "rsat/formula.hpp"
#include "rsat/rng.hpp"
#include "rsat/sampler.hpp"
#include "rsat/solver.hpp"

namespace rsat {

/// Positive clause density c = num/den, written as a decimal ("1.5") or a
/// fraction ("3/2").
class Ratio {
public:
  Ratio() = default;
  Ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0 || num == 0)
      throw Error(ErrorCode::InvalidConfig, "ratio must be positive");
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  static Ratio parse(std::string_view s) {
    auto digits = [](std::string_view d, std::uint64_t &out) {
      if (d.empty() || d.size() > 18)
        return false;
      out = 0;
      for (char ch : d) {
        if (ch < '0' || ch > '9')
          return false;
        out = out * 10 + static_cast<std::uint64_t>(ch - '0');
      }
      return true;
    };
    std::uint64_t a = 0, b = 0;
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
      if (!digits(s.substr(0, slash), a) || !digits(s.substr(slash + 1), b) || a == 0 || b == 0)
        throw Error(ErrorCode::InvalidConfig, "bad ratio '" + std::string(s) + "'");
      return Ratio(a, b);
    }
    const auto dot = s.find('.');
    const auto whole = s.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
    if (whole.empty() && frac.empty())
      throw Error(ErrorCode::InvalidConfig, "bad ratio '" + std::string(s) + "'");
    if ((!whole.empty() && !digits(whole, a)) || (!frac.empty() && !digits(frac, b)) ||
        (dot != std::string_view::npos && frac.empty()) || whole.size() + frac.size() > 18)
      throw Error(ErrorCode::InvalidConfig, "bad ratio '" + std::string(s) + "'");
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i)
      scale *= 10;
    if (a == 0 && b == 0)
      throw Error(ErrorCode::InvalidConfig, "ratio must be positive");
    return Ratio(a * scale + b, scale);
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// round(c * n), halves rounded up.
  std::uint64_t clauses_for(std::uint64_t n) const {
    const unsigned __int128 top = static_cast<unsigned __int128>(2) * num_ * n + den_;
    return static_cast<std::uint64_t>(top / (static_cast<unsigned __int128>(2) * den_));
  }

  /// Exact decimal when the denominator divides a power of ten, else "num/den".
  std::string to_string() const {
    std::uint64_t d = den_;
    unsigned twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    const unsigned places = std::max(twos, fives);
    if (d != 1 || places > 18)
      return std::to_string(num_) + "/" + std::to_string(den_);
    std::uint64_t scale = 1;
    for (unsigned i = 0; i < places; ++i)
      scale *= 10;
    const auto scaled = static_cast<unsigned __int128>(num_) * (scale / den_);
    const auto whole = static_cast<std::uint64_t>(scaled / scale);
    std::string out = std::to_string(whole);
    if (places > 0) {
      std::string frac = std::to_string(static_cast<std::uint64_t>(scaled % scale));
      out += "." + std::string(places - frac.size(), '0') + frac;
    }
    return out;
  }

  friend bool operator==(const Ratio &, const Ratio &) = default;

private:
  std::uint64_t num_ = 1;
  std::uint64_t den_ = 1;
};

struct SweepConfig {
  unsigned k = 2;
  std::vector<TruthValueSpec> vspecs;
  std::vector<std::uint32_t> n_values;
  std::vector<Ratio> c_grid;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  Decider decider = Decider::Auto;
  std::uint64_t budget = SolverOptions{}.node_budget;
  bool distinct_vars_per_clause = true;
  /// 0 means hardware concurrency; RSAT_THREADS caps either way.
  unsigned threads = 0;
};

/// One grid cell. `trials` counts decided trials only; resource-limited
/// trials are in `limited` and do not enter p_hat.
struct SweepResult {
  unsigned k = 2;
  TruthValueSpec vspec = TruthValueSpec::continuous();
  std::uint32_t n = 0;
  std::uint64_t m = 0;
  Ratio c;
  std::uint64_t trials = 0;
  std::uint64_t sat = 0;
  std::uint64_t limited = 0;
  double p_hat = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  std::uint64_t seed = 0;

  /// More than 1% of the requested trials hit the resource limit.
  bool flagged() const { return limited * 100 > trials + limited; }
};

inline std::uint64_t cell_seed(std::uint64_t master, unsigned k, const TruthValueSpec &vspec,
                               std::uint32_t n, const Ratio &c) {
  std::uint64_t s = stream_seed(master, k);
  s = stream_seed(s, static_cast<std::uint64_t>(vspec.kind()));
  s = stream_seed(s, vspec.parameter());
  s = stream_seed(s, n);
  s = stream_seed(s, c.num());
  return stream_seed(s, c.den());
}

inline unsigned effective_threads(unsigned requested) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("RSAT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1)
      t = std::min<unsigned>(t, static_cast<unsigned>(cap));
  }
  return std::max(1u, t);
}

/// Cells in order vspec, n, c. Trial i of a cell samples with
/// stream_seed(cell seed, i), so results do not depend on scheduling.
inline std::vector<SweepResult> run_sweep(const SweepConfig &cfg) {
  if (cfg.trials < 1)
    throw Error(ErrorCode::InvalidConfig, "trials must be at least 1");
  if (cfg.vspecs.empty() || cfg.n_values.empty() || cfg.c_grid.empty())
    throw Error(ErrorCode::InvalidConfig, "empty sweep grid");

  std::vector<SweepResult> cells;
  std::vector<GenConfig> gens;
  for (const auto &vspec : cfg.vspecs)
    for (auto n : cfg.n_values)
      for (const auto &c : cfg.c_grid) {
        SweepResult r;
        r.k = cfg.k;
        r.vspec = vspec;
        r.n = n;
        r.c = c;
        r.m = c.clauses_for(n);
        r.seed = cell_seed(cfg.master_seed, cfg.k, vspec, n, c);
        GenConfig g;
        g.k = cfg.k;
        g.n = n;
        g.m = r.m;
        g.vspec = vspec;
        g.distinct_vars_per_clause = cfg.distinct_vars_per_clause;
        detail::validate(g);
        cells.push_back(r);
        gens.push_back(g);
      }

  enum Outcome : std::uint8_t { Unsat, Sat, Limited };
  const std::uint64_t jobs = cells.size() * cfg.trials;
  std::vector<Outcome> outcome(jobs, Unsat);
  std::atomic<std::uint64_t> next{0};
  const SolverOptions opts{cfg.budget};

  auto worker = [&] {
    for (std::uint64_t j = next++; j < jobs; j = next++) {
      const std::uint64_t cell = j / cfg.trials;
      GenConfig g = gens[cell];
      g.seed = stream_seed(cells[cell].seed, j % cfg.trials);
      const Formula f = sample_formula(g);
      try {
        outcome[j] = solve(f, cfg.decider, opts).sat() ? Sat : Unsat;
      } catch (const Error &e) {
        if (e.code() != ErrorCode::ResourceLimit)
          throw;
        outcome[j] = Limited;
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(effective_threads(cfg.threads), jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          worker();
        } catch (...) {
          errors[t] = std::current_exception();
          next = jobs;
        }
      });
    for (auto &th : pool)
      th.join();
    for (auto &e : errors)
      if (e)
        std::rethrow_exception(e);
  }

  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    auto &r = cells[cell];
    for (std::uint64_t i = 0; i < cfg.trials; ++i) {
      const auto o = outcome[cell * cfg.trials + i];
      if (o == Limited)
        ++r.limited;
      else {
        ++r.trials;
        r.sat += o == Sat;
      }
    }
    if (r.trials > 0) {
      r.p_hat = static_cast<double>(r.sat) / static_cast<double>(r.trials);
      std::tie(r.ci_lo, r.ci_hi) = wilson_interval(r.sat, r.trials);
    } else {
      r.p_hat = r.ci_lo = r.ci_hi = std::nan("");
    }
  }
  return cells;
}

inline constexpr const char *kSweepCsvHeader = "k,v,n,m,c,trials,sat,p_hat,ci_lo,ci_hi,seed";

inline std::string format_fixed(double x, int digits = 6) {
  if (std::isnan(x))
    return "nan";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << x;
  return os.str();
}

inline void write_sweep_csv(std::ostream &os, const std::vector<SweepResult> &results) {
  os << kSweepCsvHeader << '\n';
  for (const auto &r : results)
    os << r.k << ',' << r.vspec.to_string() << ',' << r.n << ',' << r.m << ','
       << r.c.to_string() << ',' << r.trials << ',' << r.sat << ',' << format_fixed(r.p_hat)
       << ',' << format_fixed(r.ci_lo) << ',' << format_fixed(r.ci_hi) << ',' << r.seed
       << '\n';
}

/// Companion file listing resource-limited trial counts per cell.
inline void write_limits_csv(std::ostream &os, const std::vector<SweepResult> &results) {
  os << "k,v,n,m,c,limited,requested,flagged\n";
  for (const auto &r : results)
    os << r.k << ',' << r.vspec.to_string() << ',' << r.n << ',' << r.m << ','
       << r.c.to_string() << ',' << r.limited << ',' << (r.trials + r.limited) << ','
       << (r.flagged() ? 1 : 0) << '\n';
}

/// First downward crossing of p_hat through `target`, by linear
/// interpolation in c. Results are ordered by c; cells without decided
/// trials are skipped.
inline double estimate_crossing(std::vector<SweepResult> results, double target = 0.5) {
  std::erase_if(results, [](const SweepResult &r) { return r.trials == 0; });
  std::stable_sort(results.begin(), results.end(), [](const SweepResult &a, const SweepResult &b) {
    return static_cast<unsigned __int128>(a.c.num()) * b.c.den() <
           static_cast<unsigned __int128>(b.c.num()) * a.c.den();
  });
  for (std::size_t i = 1; i < results.size(); ++i) {
    const double p0 = results[i - 1].p_hat, p1 = results[i].p_hat;
    if (p0 >= target && p1 < target) {
      const double c0 = results[i - 1].c.to_double(), c1 = results[i].c.to_double();
      if (p0 == target)
        return c0;
      return c0 + (p0 - target) / (p0 - p1) * (c1 - c0);
    }
  }
  throw Error(ErrorCode::NoCrossing, "p_hat never falls through the target");
}

} // namespace rsat
