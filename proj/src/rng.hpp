#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "matrix.hpp"

namespace fz {

/// xoshiro256** seeded through SplitMix64. The algorithm is pinned so that
/// mask draws, weight init and synthetic data are bit-reproducible across
/// platforms and implementations. Single-owner: not safe to share between
/// threads; derive one instance per concurrent context instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform draw in [0, 1): top 53 bits scaled by 2^-53.
    double next_uniform();

    /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
    double next_gaussian();

    /// Uniform integer in [0, n), rejection-sampled so the stream stays
    /// platform-independent.
    std::uint64_t next_below(std::uint64_t n);

    std::uint64_t seed() const noexcept { return seed_; }

    std::array<std::uint64_t, 4> state() const noexcept { return s_; }
    static Rng from_state(const std::array<std::uint64_t, 4>& s, std::uint64_t seed);

private:
    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_ = 0;
};

/// Matrix with every entry drawn sequentially from rng in row-major order.
Matrix rng_uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols);

std::uint64_t splitmix64_next(std::uint64_t& state);

/// FNV-1a 64-bit, for turning string keys into substream keys.
std::uint64_t hash_str(std::string_view s);

/// Deterministic substream derivation: folds each key into the seed through
/// SplitMix64 finalizers. Disjoint key paths give statistically independent
/// streams for the same base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);
Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

} // namespace fz
