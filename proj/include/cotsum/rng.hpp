#pragma once

#include <cstdint>

namespace cotsum {

// Counter-based generator: draw i of a stream is a pure function of
// (seed, i). Subranges can therefore be generated independently by any
// worker, and output is identical across platforms and thread counts.
// Mixing function is the standard splitmix64 finalizer.
struct CounterRng {
    uint64_t seed;

    explicit CounterRng(uint64_t s) : seed(s) {}

    uint64_t bits(uint64_t i) const {
        uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double uniform(uint64_t i) const {
        return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1) at long double granularity; never exactly 0 or 1.
    long double uniform_ld(uint64_t i) const {
        return static_cast<long double>(bits(i) | 1ULL) * 0x1.0p-64L;
    }

    // Uniform integer in [0, n), n >= 1. Slight modulo bias is irrelevant
    // for test-case generation (n << 2^64).
    uint64_t below(uint64_t i, uint64_t n) const { return bits(i) % n; }
};

} // namespace cotsum
