// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace crsp::rng {

// All randomness in the library flows through these helpers so that results
// are reproducible bit-for-bit across platforms. std::mt19937_64 is fully
// specified by the standard; the distributions below are hand-rolled because
// the standard library's are not portable.

/// SplitMix64 mixing step, used to derive independent substreams from one
/// user-facing seed.
inline std::uint64_t split_mix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Engine for substream `stream` of `seed`. Streams with distinct ids are
/// statistically independent, so adding a stream never perturbs the others.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = split_mix(s);
    s = a ^ (stream * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull);
    std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                      static_cast<unsigned>(split_mix(s)), static_cast<unsigned>(stream),
                      static_cast<unsigned>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return std::ldexp(static_cast<double>(gen() >> 11), -53);
}

/// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t below(std::mt19937_64& gen, std::uint64_t n) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
    std::uint64_t v;
    do {
        v = gen();
    } while (v >= limit);
    return v % n;
}

}  // namespace crsp::rng
