#pragma once

#include <cstdint>
#include <limits>

#include "qgate/complex_matrix.hpp"

namespace qgate {

/// Identifies a reproducible random stream. Draws are a pure function of
/// (seed, stream, counter): a stream never depends on how many values other
/// streams consumed, so per-trial streams can be replayed in isolation.
struct RandomSource {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    /// Child stream keyed by `index`; distinct indices give unrelated streams.
    RandomSource derive(std::uint64_t index) const noexcept;

    friend bool operator==(const RandomSource&, const RandomSource&) = default;
};

/// Counter-based generator over a RandomSource. Satisfies
/// UniformRandomBitGenerator. Normals use the polar method on our own
/// uniforms so sequences do not depend on the standard library vendor.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(RandomSource source) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal N(0, 1).
    double normal() noexcept;
    /// Standard complex normal: real and imaginary parts N(0, 1/2).
    cplx complex_normal() noexcept;

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// SplitMix64 finalizer; exposed for stream derivation and hashing.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace qgate
