#pragma once

#include <cstdint>
#include <limits>

namespace bellcc {

/// SplitMix64 stream. Small state, so a fresh stream can be derived per
/// (seed, counter) pair, which keeps Monte Carlo tallies independent of the
/// order rounds are evaluated in.
///
/// All derived quantities (uniform doubles, normals, coins) are computed here
/// rather than through <random> distributions so outputs are bit-identical
/// across standard library implementations.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  // Independent stream for the given counter under a master seed.
  static RngStream derive(std::uint64_t master_seed, std::uint64_t counter);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller (one value per call, no caching).
  double normal();
  // +1 or -1 with equal probability.
  int sign();

 private:
  std::uint64_t state_;
};

}  // namespace bellcc
