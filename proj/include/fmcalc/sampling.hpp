#pragma once

// Platform-stable pseudo-randomness for seeded scans. Standard library
// distributions are implementation-defined, so integers are drawn directly.

#include <cstdint>

#include "fmcalc/cycle_sheaves.hpp"

namespace fmcalc {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent stream per (seed, index), regardless of evaluation order.
  static SplitMix64 for_sample(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ 0x9E3779B97F4A7C15ULL);
    std::uint64_t s = mix.next();
    SplitMix64 mix2(s + index * 0xD1B54A32D192ED03ULL);
    return SplitMix64(mix2.next());
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi].
  long uniform(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

 private:
  std::uint64_t state_;
};

namespace cyc {

enum class GluingKind { Dense, Diagonal, Identity, ScaledShift, Triangular };
const char* to_string(GluingKind k);

Matrix<Rational> random_gluing(SplitMix64& rng, std::size_t rank, GluingKind kind);
GluingKind random_gluing_kind(SplitMix64& rng);

// Splitting entries uniform in [lo, hi]; gluing kinds drawn per node.
CycleBundle random_bundle(SplitMix64& rng, std::size_t n, std::size_t rank, long lo, long hi);

// Bundle with prescribed total determinant degree: the multidegree is drawn
// (definite with probability 1/2 when |degree| >= n), then split per component
// into entries within `spread` of the even share.
CycleBundle random_bundle_with_degree(SplitMix64& rng, std::size_t n, std::size_t rank, long degree, long spread);

}  // namespace cyc
}  // namespace fmcalc
