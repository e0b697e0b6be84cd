#pragma once

// Counter-based pseudo-randomness.  One user-facing seed is expanded into any
// number of independent replicate streams keyed by an integer, so parallel
// replicates are reproducible regardless of scheduling: stream k of seed s is
// the same bit sequence no matter which thread draws it.
//
// The core is SplitMix64 (Steele-Lea-Flood mixing of an additive counter),
// which is exactly a counter + bijective finalizer.

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace sawtooth {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(detail::splitmix64(seed ^ 0x5851f42d4c957f2dULL) ^
              detail::splitmix64(stream * 0xda942042e4dd58b5ULL + 1)),
        counter_(0) {}

  std::uint64_t next_u64() { return detail::splitmix64(base_ + ++counter_ * 0x9e3779b97f4a7c15ULL); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling to kill modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  // Standard normal via Box-Muller; second value cached.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sawtooth
