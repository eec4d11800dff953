#pragma once

// Deterministic, platform-independent RNG for parameter generation.
// std:: distributions are not pinned across standard libraries, so draws
// are mapped from raw 64-bit outputs explicitly.

#include <cstdint>

namespace palletbench {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // [0, n)
  std::uint64_t next_below(std::uint64_t n) { return n > 0 ? next() % n : 0; }

 private:
  std::uint64_t state_;
};

// Independent per-run streams from one campaign seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
  return mix.next();
}

}  // namespace palletbench
