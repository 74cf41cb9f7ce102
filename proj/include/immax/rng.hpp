#pragma once

#include "immax/types.hpp"

#include <cmath>
#include <cstdint>

namespace immax {

// Small counter-friendly PRNG used everywhere randomness is needed.
// Self-contained so that identical seeds give identical streams on any
// platform, independent of standard-library distribution internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  Real uniform01() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller.
  Real normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    Real u1 = uniform01();
    while (u1 <= 0) u1 = uniform01();
    const Real u2 = uniform01();
    const Real radius = std::sqrt(-2.0 * std::log(u1));
    const Real angle = 2.0 * M_PI * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  bool bernoulli(Real p) { return uniform01() < p; }

  int sign() { return (next_u64() & 1u) ? +1 : -1; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
  Real cached_ = 0;
  bool have_cached_ = false;
};

/// Derives an independent stream seed from (seed, index). Used to split a
/// master seed into per-class, per-fold or per-trial streams whose draws do
/// not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng(seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL));
  rng.next_u64();
  return rng.next_u64();
}

}  // namespace immax
