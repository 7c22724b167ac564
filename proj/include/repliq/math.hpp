#pragma once

// Small numeric helpers shared across the library: harmonic numbers, the
// standard normal CDF, and deterministic RNG stream derivation.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace repliq::math {

/// n-th harmonic number H_n = sum_{i=1}^{n} 1/i, with H_0 = 0.
/// Exact summation for small n, Euler-Maclaurin expansion beyond
/// (truncation error below 1e-15 for n > 256).
inline double harmonic_number(double n) {
    if (!(n >= 0.0)) {
        throw std::domain_error("harmonic_number: n must be >= 0");
    }
    if (n == 0.0) {
        return 0.0;
    }
    if (n <= 256.0) {
        double h = 0.0;
        const auto ni = static_cast<std::int64_t>(n);
        for (std::int64_t i = 1; i <= ni; ++i) {
            h += 1.0 / static_cast<double>(i);
        }
        return h;
    }
    constexpr double euler_gamma = 0.57721566490153286;
    const double inv = 1.0 / n;
    const double inv2 = inv * inv;
    return std::log(n) + euler_gamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
}

inline double harmonic_number(std::int64_t n) {
    if (n < 0) {
        throw std::domain_error("harmonic_number: n must be >= 0");
    }
    return harmonic_number(static_cast<double>(n));
}

/// Standard normal CDF via erfc; accurate in both tails.
inline double normal_cdf(double z) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    return 0.5 * std::erfc(-z * inv_sqrt2);
}

/// splitmix64 finalizer; used to turn (seed, index) into an RNG seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the RNG stream of one replication. Streams for distinct indices
/// are decorrelated, so replications can run in any order.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Map a 64-bit word to a uniform draw in (0, 1].
inline double uniform01(std::uint64_t word) {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

/// One standard normal draw via Box-Muller (consumes two words from rng).
/// Implemented explicitly so the draw sequence is identical on every
/// platform for a given generator state.
template <class Rng>
double standard_normal(Rng& rng) {
    const double u1 = uniform01(rng());
    const double u2 = uniform01(rng());
    constexpr double two_pi = 6.28318530717958647693;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace repliq::math
