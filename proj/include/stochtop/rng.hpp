#pragma once

#include <cmath>
#include <cstdint>

namespace stochtop {

/// Deterministic 64-bit generator (splitmix64).  Used everywhere instead of
/// <random> engines so that streams are bit-exact across platforms and
/// compilers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Stateless seed derivation: hashes (master, stream, index) through two
/// splitmix rounds.  Parallel workers derive their stream from the same
/// master seed regardless of scheduling, which keeps sweeps bit-exact at any
/// thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    SplitMix64 g(master ^ (0x6A09E667F3BCC909ULL + stream * 0x9E3779B97F4A7C15ULL));
    std::uint64_t a = g.next_u64();
    SplitMix64 h(a ^ (0xBB67AE8584CAA73BULL + index * 0xC2B2AE3D27D4EB4FULL));
    h.next_u64();
    return h.next_u64();
}

/// Poisson draw by chunked inversion: exact given the uniform stream, and
/// safe for large means (chunks keep e^{-lambda} representable).
inline long poisson_draw(SplitMix64& rng, double mean) {
    long total = 0;
    double remaining = mean;
    constexpr double kChunk = 30.0;
    while (remaining > 0.0) {
        const double lam = remaining > kChunk ? kChunk : remaining;
        remaining -= lam;
        const double u = rng.next_unit();
        double p = std::exp(-lam);
        double cdf = p;
        long k = 0;
        // Sequential search; the loop bound guards against u landing in the
        // far tail where cdf stalls at 1 - ulp.
        const long kMax = static_cast<long>(lam + 20.0 * (1.0 + lam)) + 50;
        while (u > cdf && k < kMax) {
            ++k;
            p *= lam / static_cast<double>(k);
            cdf += p;
        }
        total += k;
    }
    return total;
}

}  // namespace stochtop
