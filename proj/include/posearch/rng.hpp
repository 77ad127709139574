#pragma once

#include <cstdint>
#include <random>

namespace posearch {

// Seed derivation and bounded draws avoid std::uniform_* distributions so
// that identical seeds give identical streams on every platform.

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t rng_below(std::mt19937_64& g, std::uint64_t bound) {
    return bound ? g() % bound : 0;
}

// Uniform in [0, 1).
inline double rng_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace posearch
