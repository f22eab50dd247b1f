#pragma once

#include <cstdint>
#include <random>

namespace msvi {

/// Seedable generator with a stable cross-platform stream.
///
/// Wraps std::mt19937_64, whose raw 64-bit output sequence is pinned by the
/// C++ standard, and maps words to doubles with a fixed 53-bit rule instead
/// of std::uniform_real_distribution (whose mapping is implementation
/// defined). Identical seeds therefore produce identical draws on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_word() { return engine_(); }

  /// Uniform draw in [0, 1) using the top 53 bits of one word.
  double uniform01() {
    return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
  }

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace msvi
