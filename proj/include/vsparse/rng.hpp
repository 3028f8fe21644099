#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace vsparse {

/// splitmix64 step. Used to scramble seeds so that nearby seed values
/// (base ^ replicate_index) start the engine in uncorrelated states.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an auxiliary stream (e.g. the occlusion and reversion passes of a
/// mixed contamination share one caller seed but must draw independent sets).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

/// Seed for Monte Carlo replicate r of a run with the given base seed.
inline std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t r) {
  return base_seed ^ r;
}

/// Deterministic random source. The engine (mt19937_64) and every
/// distribution below are fully specified here, so identical seeds produce
/// identical draws on any platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform integer in [0, bound), bound >= 1. Rejection sampling, no
  /// modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Draw m of {0,...,n-1} uniformly without replacement (partial
  /// Fisher-Yates). Returned sorted ascending.
  std::vector<int> sample_without_replacement(int n, int m);

  /// Index in [0, cdf.size()) by inversion of the cumulative weights.
  /// cdf must be non-decreasing with cdf.back() == 1 (enforced by caller).
  int sample_cdf(const std::vector<double>& cdf) {
    const double u = next_double();
    int lo = 0;
    int hi = static_cast<int>(cdf.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cdf[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vsparse
