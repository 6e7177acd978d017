#pragma once

// Portable sampling on top of std::mt19937_64. The standard distributions
// are implementation-defined, so they are avoided to keep runs bit-identical
// across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace neorl {

using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

/// Uniform integer in [0, n).
inline int uniform_index(Rng& rng, int n) {
  // Rejection sampling keeps the draw unbiased for every n.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % range;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return static_cast<int>(v % range);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

inline double uniform_angle(Rng& rng) { return 2.0 * std::numbers::pi * uniform01(rng); }

/// SplitMix64 finalizer; derives independent stream seeds from one seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace neorl
