#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace hsieve {

using Rng = std::mt19937_64;

// Unbiased index in [0, n). Unlike std::uniform_int_distribution the
// sequence is the same on every standard library. Requires n > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = Rng::max() - Rng::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace hsieve
