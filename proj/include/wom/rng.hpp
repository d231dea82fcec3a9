#pragma once

#include <cstdint>

namespace wom {

// SplitMix64 (Steele/Lea/Flood). Every random draw in this library flows
// through this generator: the <random> distributions are
// implementation-defined, which would break byte-level reproducibility of
// reports and set files across toolchains.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p_true) { return next_double() < p_true; }

 private:
  std::uint64_t state_;
};

// Substream derivation: per-trial / per-attempt / per-purpose seeds are
// mix_seed(seed, k), the first output of a SplitMix64 initialized with
// seed XOR (k+1)*0x9e3779b97f4a7c15. The +1 keeps stream 0 distinct from
// the base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(seed ^ ((stream + 1) * 0x9e3779b97f4a7c15ull)).next();
}

}  // namespace wom
