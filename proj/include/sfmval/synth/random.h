#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sfmval {

// Counter-based generator: the i-th draw of (seed, stream) is
// SplitMix64Mix(key(seed, stream) + (i + 1) * golden). Results depend only on
// the seed, the stream id and the draw index, so fixtures are reproducible
// bit for bit across runs and platforms with IEEE doubles.
class CounterRng {
 public:
  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  static constexpr uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  CounterRng(uint64_t seed, uint64_t stream)
      : key_(Mix(seed ^ Mix(stream + kGolden))) {}

  uint64_t NextU64() { return Mix(key_ + (++counter_) * kGolden); }

  // [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller (cosine branch); consumes two draws.
  double Normal() {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform integer in [0, bound).
  uint64_t Below(uint64_t bound) {
    return static_cast<uint64_t>(Uniform() * static_cast<double>(bound)) % bound;
  }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace sfmval
