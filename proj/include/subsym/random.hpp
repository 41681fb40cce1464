#pragma once

#include <cstdint>

namespace subsym {

/// SplitMix64 with named streams.
///
/// Stream `s` of seed `x` starts from state mix(x + (s + 1) * 0x9E3779B97F4A7C15),
/// where mix is the SplitMix64 finalizer. `next()` is the reference
/// SplitMix64 step. `uniform(a, b)` uses rejection sampling on the top of the
/// 64-bit range, so draws are identical on every platform (unlike the
/// implementation-defined std distributions).
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed + (stream + 1) * kGamma)) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

 private:
  std::uint64_t state_;
};

}  // namespace subsym
