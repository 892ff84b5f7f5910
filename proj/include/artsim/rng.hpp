#pragma once

#include <cstdint>
#include <string_view>

namespace artsim {

// Deterministic RNG helpers. All randomness in the project flows through
// these so results are reproducible independent of the standard library's
// distribution implementations.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Derive an independent sub-seed for a named purpose. Adding a new purpose
// label never perturbs the stream of an existing one.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view purpose) {
    std::uint64_t s = base ^ fnv1a64(purpose);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform integer in [0, bound), bound >= 1. Rejection-free multiply-shift
    // (bias < 2^-64, irrelevant at simulation scale but stable across builds).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::uint64_t state_;
};

}  // namespace artsim
