#pragma once

#include <cstdint>

namespace pltor {

/// Splittable deterministic generator (splitmix64 core).
///
/// Every random quantity in the library flows from a single 64-bit seed
/// through split(): children are derived from the construction seed and a
/// tag, so consuming numbers from a parent never changes what a child
/// produces.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : base_(seed), state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  /// Uniform integer in [0, n), n >= 1.
  int uniform_int(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(next_u64()) *
                             static_cast<unsigned __int128>(n)) >>
                            64);
  }

  /// Child generator independent of how much this one has produced.
  SplitRng split(uint64_t tag) const {
    uint64_t z = base_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return SplitRng(z ^ (z >> 31));
  }

 private:
  uint64_t base_;
  uint64_t state_;
};

}  // namespace pltor
