#pragma once

#include <cstdint>

namespace onemax {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel and serial evaluation orders produce
/// identical values. Streams split work units (grid cell, trial, window);
/// counters index the draws inside one unit.
struct CounterRng {
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    static std::uint64_t value(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
        return mix(mix(mix(seed) ^ stream) ^ counter);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    static double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
        return static_cast<double>(value(seed, stream, counter) >> 11) * 0x1.0p-53;
    }
};

/// Standard normal deviate via the Beasley-Springer-Moro inverse CDF
/// approximation; deterministic across platforms.
double inverse_normal_cdf(double u);

} // namespace onemax
