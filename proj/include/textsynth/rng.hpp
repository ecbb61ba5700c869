#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace textsynth {

using Rng = std::mt19937_64;

// Derives well-separated stream seeds from a base seed. Bijective over u64,
// so distinct inputs give distinct outputs.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined and therefore
// not reproducible across standard libraries; this is.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling on the low bits keeps the
// draw exactly uniform and portable.
inline uint64_t uniform_below(Rng& rng, uint64_t n) {
    if (n == 0) {
        return 0;
    }
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = rng();
    while (v >= limit) {
        v = rng();
    }
    return v % n;
}

// First k positions of a uniform random permutation of {0, ..., n-1}
// (partial Fisher-Yates). Requires k <= n.
std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k);

}  // namespace textsynth
