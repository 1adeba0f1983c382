#pragma once

#include <cstdint>

namespace qsense {

/// Mixes a 64-bit value through one splitmix64 round.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and an index.
/// The result depends only on (master, index), so parallel consumers can
/// reconstruct any stream without coordination.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

/// Small counter-free generator (xoshiro256++) with a portable Box-Muller
/// normal sampler. Sequences are fully determined by the seed; no
/// implementation-defined distributions are involved.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal deviate (Box-Muller, both values consumed in order).
    double normal();

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qsense
