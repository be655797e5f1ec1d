#pragma once

#include <cstdint>

namespace cnet {

/// Deterministic 64-bit-state PRNG (splitmix64, Steele et al. / Vigna).
///
/// Chosen over std::mt19937_64 because every draw is reproducible from a
/// single u64 seed, the algorithm is fixed across platforms and standard
/// library versions, and streams can be split so independent consumers
/// (per weight matrix, per training arm) never share state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be nonzero. Uses rejection sampling
    /// so the distribution is exact and platform-independent.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal via Box-Muller (deterministic, unlike
    /// std::normal_distribution whose algorithm is implementation-defined).
    double next_gaussian();

    /// Independent child stream seeded from this one.
    SplitMix64 split() { return SplitMix64(next_u64()); }

private:
    std::uint64_t state_;
};

} // namespace cnet
