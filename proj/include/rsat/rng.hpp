#pragma once

#include <cstdint>
#include <random>

namespace rsat {

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the i-th independent stream derived from `master`.
///
/// stream_seed(master, i) = mix64(mix64(master) ^ mix64(i + 0x632be59bd9b4e019))
/// Every trial of a sweep draws from its own stream, so a trial can be
/// replayed from (master, i) alone and scheduling never changes results.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t i) {
  return mix64(mix64(master) ^ mix64(i + 0x632be59bd9b4e019ULL));
}

/// Deterministic generator. The engine output sequence is fixed by the
/// standard; the bounded draws below avoid std distributions, whose
/// algorithms are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 prod = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  /// `count` independent fair bits as an integer, count <= 64.
  std::uint64_t bits(unsigned count) {
    if (count == 0)
      return 0;
    return next() >> (64 - count);
  }

  bool coin() { return bits(1) != 0; }

  /// True with probability num/den.
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  /// Uniform double in [0,1) with 53 random bits.
  double unit() { return static_cast<double>(bits(53)) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

} // namespace rsat
