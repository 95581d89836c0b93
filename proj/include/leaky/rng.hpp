#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace leaky {

// Deterministic 64-bit seed mixing (splitmix64 finalizer). Used to derive
// per-cell and per-repetition seeds so that experiment sharding is
// reproducible regardless of scheduling order.
inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + b;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, double b) {
    return seed_mix(a, std::bit_cast<std::uint64_t>(b + 0.0));
}

// Seed for one (cell, repetition) job of a sweep.
inline std::uint64_t cell_seed(std::uint64_t base, int n, int d, double l_value, int rep) {
    std::uint64_t s = seed_mix(base, static_cast<std::uint64_t>(n));
    s = seed_mix(s, static_cast<std::uint64_t>(d));
    s = seed_mix(s, l_value);
    return seed_mix(s, static_cast<std::uint64_t>(rep));
}

// Stream tags for independent sub-generators derived from one job seed.
enum class SeedStream : std::uint64_t {
    Theta = 0x7468657461ULL,
    Uniform = 0x756e6966ULL,
    Target = 0x74617267ULL,
    Folds = 0x666f6c64ULL,
    HaarPairs = 0x68616172ULL,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, SeedStream stream) {
    return std::mt19937_64(seed_mix(seed, static_cast<std::uint64_t>(stream)));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed_mix(seed, std::uint64_t{0x6c65616b}));
}

// FNV-1a over bytes; stable across platforms, used for config hashing and
// SVG regression hashes.
inline std::uint64_t fnv1a(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace leaky
