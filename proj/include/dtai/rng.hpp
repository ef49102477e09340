#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dtai/error.hpp"

namespace dtai {

/// Seed for any randomized operation. Identical seeds give bitwise-identical
/// sequences on every platform: all draws go through the fixed-width helpers
/// below instead of the implementation-defined <random> distributions.
struct rng_seed {
  std::uint64_t value = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Derives a decorrelated sub-seed, e.g. one per Monte Carlo stratum.
inline rng_seed mix_seed(rng_seed base, std::uint64_t stream) {
  std::uint64_t state = base.value ^ (0x6a09e667f3bcc909ull + stream);
  std::uint64_t a = detail::splitmix64(state);
  std::uint64_t b = detail::splitmix64(state);
  return rng_seed{a ^ (b << 1)};
}

class rng {
 public:
  explicit rng(rng_seed seed) {
    std::uint64_t state = seed.value;
    // Warm the engine from splitmix output so nearby seeds diverge.
    std::seed_seq seq{
        static_cast<std::uint32_t>(detail::splitmix64(state)),
        static_cast<std::uint32_t>(detail::splitmix64(state) >> 32),
        static_cast<std::uint32_t>(detail::splitmix64(state)),
        static_cast<std::uint32_t>(detail::splitmix64(state) >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(bits() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased index in [0, n).
  std::size_t index(std::size_t n) {
    require(n > 0, errc::invalid_parameter, "rng::index needs n > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = bits();
    while (x >= limit) x = bits();
    return static_cast<std::size_t>(x % n);
  }

  /// Unit-rate exponential draw.
  double exponential() { return -std::log1p(-uniform()); }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace dtai
