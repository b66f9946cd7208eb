#pragma once
// Counter-seeded RNG for reproducible parallel sampling.  Each replicate owns
// an independent SplitMix64 stream derived injectively from (master_seed,
// replicate index), so results do not depend on how replicates are scheduled
// across threads.

#include <cstdint>

namespace mapstat {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// Injective in `replicate` for a fixed master seed (odd multiplier, then a
/// bijective finalizer).
inline std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t replicate) {
    return mix64(master_seed ^ (0x9E3779B97F4A7C15ULL * (replicate + 1)));
}

/// Unbiased uniform draw from [0, bound) by 128-bit multiply with rejection.
inline std::uint64_t uniform_below(SplitMix64& gen, std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(gen.next()) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (lo < threshold) {
            m = static_cast<unsigned __int128>(gen.next()) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace mapstat
