#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace orad::rng {

// Counter-based generator: every variate is a pure function of
// (seed, stream index, position), so parallel draws need no shared state.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t pos) {
    std::uint64_t h = splitmix64(seed ^ 0x243F6A8885A308D3ULL);
    h = splitmix64(h ^ index);
    return splitmix64(h ^ pos);
}

// Uniform in the open interval (0,1); never returns 0, so log() is safe.
inline double uniform01(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller pair of independent standard normals at stream position pos.
inline std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t index, std::uint64_t pos) {
    const double u1 = uniform01(counter_hash(seed, index, 2 * pos));
    const double u2 = uniform01(counter_hash(seed, index, 2 * pos + 1));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

// Standard complex Gaussian (unit complex variance).
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t index, std::uint64_t pos) {
    auto [re, im] = gaussian_pair(seed, index, pos);
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

} // namespace orad::rng
