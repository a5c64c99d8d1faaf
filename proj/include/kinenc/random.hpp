#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "kinenc/text_io.hpp"

namespace kinenc {

using Rng = std::mt19937_64;

/// Seed for a named sub-stream of a root seed ("data", "classifier", "agent", ...).
/// Stages seeded this way can be re-run independently of each other.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stream) {
    std::uint64_t z = root ^ text::fnv1a64(stream);
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t root, std::string_view stream) { return Rng(derive_seed(root, stream)); }

} // namespace kinenc
