#pragma once

#include <cstdint>
#include <random>

namespace smfdfa {

// Seeded 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is
// fixed by the C++ standard). Bounded integers and normals are derived here
// rather than through <random> distributions, whose algorithms are
// implementation-defined, so that a seed gives the same stream on every
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound) by rejection from the top of the range.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via the Box-Muller transform; pairs are cached.
  double normal();

  // +1 or -1 with equal probability (top bit of the next draw).
  double sign() { return (next() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace smfdfa
