#pragma once

// Seeded generator with a fully pinned output sequence: the 64-bit Mersenne
// Twister (std::mt19937_64, whose output is fixed by the C++ standard) and
// explicit conversions, so corpora are reproducible across standard
// libraries and languages. std::uniform_*_distribution is deliberately not
// used because its algorithm is implementation-defined.
//
//   unit()        = (next() >> 11) * 2^-53              in [0, 1)
//   uniform(a, b) = a + (b - a) * unit()
//   below(k)      = floor(unit() * k)                   in {0..k-1}

#include <cstdint>
#include <random>

namespace farkas {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t below(std::uint64_t k) {
    return static_cast<std::uint64_t>(unit() * static_cast<double>(k));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace farkas
