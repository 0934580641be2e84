#pragma once

#include <cstdint>

namespace fncr {

/// SplitMix64. The single fixture generator for this repository: synthetic
/// datasets, initial iterates, and test instances all derive from it, so any
/// implementation in any language can reproduce them bit-for-bit. The update
/// and output functions are the reference constants from Steele et al.'s
/// splittable-generators construction.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller on consecutive uniforms; the second
  /// value of each pair is cached.
  double gaussian();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fncr
