#pragma once

#include <cstdint>

namespace idos {

// SplitMix64 (Steele/Lea/Flood). Used everywhere randomness is needed so
// that runs are reproducible bit-for-bit across platforms and stdlibs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); bound > 0. Rejection-free modulo is fine here:
  // bounds are tiny compared to 2^64, bias is negligible for test usage,
  // but we still debias to keep draws portable and exact.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Deterministic derivation of sub-stream seeds from a base seed. Streams
// derived with distinct tags are independent for practical purposes.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  SplitMix64 s(base ^ (0xA0761D6478BD642FULL * (tag + 1)));
  return s.next();
}

}  // namespace idos
