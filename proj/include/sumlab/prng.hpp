#pragma once

#include <cstdint>

// Deterministic 64-bit generator used for every seeded choice in the library.
// The name below is recorded in run reports so results can be reproduced even
// if the generator is ever swapped out.

namespace sumlab {

inline constexpr char kPrngName[] = "splitmix64-v1";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-enough value in [0, bound); bound must be nonzero.  The modulo
  // bias is irrelevant at the bounds used here and keeps replay trivial.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Fair coin.
  bool flip() { return (next() >> 63) != 0; }

  // Uniform in [0,1) with 53 bits of precision.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace sumlab
