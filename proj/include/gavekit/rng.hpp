#pragma once

#include <cstdint>

namespace gavekit {

// Self-contained splitmix64 stream; keeps seeded runs identical across
// platforms, unlike the standard-library distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int pick_sign() { return next() & 1 ? 1 : -1; }

 private:
  std::uint64_t state_;
};

}  // namespace gavekit
