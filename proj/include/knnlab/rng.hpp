// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace knnlab {

/// SplitMix64 finalizer; a bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over the bytes of a label; used to turn names into stream keys.
constexpr std::uint64_t hash_label(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives an independent stream key from a master seed and a tuple of
/// dimension labels. The result depends only on the inputs, never on the
/// order in which other streams were created.
inline std::uint64_t substream_key(std::uint64_t master_seed,
                                   std::initializer_list<std::uint64_t> labels) noexcept {
    std::uint64_t h = mix64(master_seed ^ 0x6a09e667f3bcc908ULL);
    for (std::uint64_t label : labels) {
        h = mix64(h ^ mix64(label + 0x3c6ef372fe94f82bULL));
    }
    return h;
}

/// Seeded generator with the handful of draws the simulations need. The
/// conversions are spelled out so streams are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels) {
        return Rng(substream_key(master_seed, labels));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound) {
        // Rejection on the top of the range keeps the draw exactly uniform.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace knnlab
