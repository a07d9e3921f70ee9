#pragma once

// Counter-based random number generation.  Every deviate is a pure function
// of a (seed, stream, counter) triple, so ensemble members and per-mode noise
// increments can be generated in any order, on any number of threads, with
// bit-identical results.

#include <cstdint>
#include <cmath>
#include <utility>

namespace fsnse {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Mixes a seed and up to three sub-stream identifiers into one 64-bit key.
constexpr std::uint64_t rng_key(std::uint64_t seed, std::uint64_t s0 = 0,
                                std::uint64_t s1 = 0, std::uint64_t s2 = 0) noexcept {
    std::uint64_t k = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    k = splitmix64(k ^ s0);
    k = splitmix64(k ^ s1);
    k = splitmix64(k ^ s2);
    return k;
}

// Uniform deviate in (0, 1], indexed by (key, counter).
inline double rng_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
    const std::uint64_t h = splitmix64(key + 0x9e3779b97f4a7c15ULL * (counter + 1));
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

// Two independent standard normal deviates via Box-Muller, indexed by
// (key, counter).  Distinct counters give independent pairs.
inline std::pair<double, double> rng_gaussian_pair(std::uint64_t key,
                                                   std::uint64_t counter) noexcept {
    const double u1 = rng_uniform(key, 2 * counter);
    const double u2 = rng_uniform(key, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace fsnse
