#pragma once

#include <cstdint>

// Counter-based generator: every variate is a pure function of
// (seed, stream, counter), so matrices and Monte-Carlo trials can be filled
// in any order, on any number of threads, with bit-identical results.

namespace plssvd::rng {

// SplitMix64 finalizer; passes the usual avalanche tests.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
    return mix64(mix64(seed ^ 0x6a09e667f3bcc908ULL) ^
                 mix64(stream * 0xb5297a4d3dull + 0x165667b19e3779f9ULL) ^
                 mix64(counter));
}

// Uniform in (0, 1]; the top 53 bits of the hash, never exactly zero.
inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter) {
    const std::uint64_t bits = keyed(seed, stream, counter) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller keyed on (seed, stream, 2k / 2k+1).
double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace plssvd::rng
