#pragma once

#include <cstdint>
#include <random>

namespace mlcc::rng {

using Engine = std::mt19937_64;

/// Uniform index in [0, k) by rejection sampling; reproducible across
/// platforms, unlike std::uniform_int_distribution.
inline std::uint64_t uniform_index(Engine& gen, std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("uniform_index: k must be positive");
    const std::uint64_t limit = k * (UINT64_MAX / k);
    std::uint64_t r;
    do {
        r = gen();
    } while (r >= limit);
    return r % k;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real01(Engine& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline bool bernoulli_half(Engine& gen) { return (gen() & 1ull) != 0; }

}  // namespace mlcc::rng
