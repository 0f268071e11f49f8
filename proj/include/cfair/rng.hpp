#pragma once

#include <cstdint>
#include <string_view>

namespace cfair {

/// Deterministic 64-bit generator (splitmix64 stream).
///
/// Every randomized operation in the library draws from this engine rather
/// than from std:: distributions, whose output is implementation-defined.
/// Given the same seed the stream of uniforms, bounded integers and normal
/// deviates is identical on every platform the library builds on.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  uint64_t uniform_below(uint64_t bound);

  /// Standard normal deviate via Box-Muller (two uniforms per call).
  double normal();

  /// Bernoulli draw with success probability p.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  uint64_t state_;
};

/// Derives an independent child seed from (base, tag, index).
uint64_t mix_seed(uint64_t base, std::string_view tag, uint64_t index = 0);

}  // namespace cfair
