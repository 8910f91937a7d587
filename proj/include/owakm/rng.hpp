#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "owakm/errors.hpp"
#include "owakm/rational.hpp"

namespace owakm {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-trial seed schedule: seed_i = mix64(master + i * golden_gamma).
// Trials are independent of evaluation order, so they can run in parallel.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
    return mix64(master + 0x9E3779B97F4A7C15ULL * trial_index);
}

// Uniform double in [0,1) with 53 random bits. std::uniform_real_distribution
// is implementation-defined, so seeded outputs would not be reproducible.
inline double u01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform draw from {0, 1, ..., n-1}.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw InputError("uniform_below: n must be positive");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Bernoulli draw with an exactly rational success probability.
inline bool bernoulli_exact(Rng& rng, const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    const BigInt& num = numerator(p);
    const BigInt& den = denominator(p);
    if (den > std::numeric_limits<std::uint64_t>::max())
        throw InputError("bernoulli_exact: probability denominator exceeds 64 bits");
    return uniform_below(rng, den.convert_to<std::uint64_t>()) < num.convert_to<std::uint64_t>();
}

} // namespace owakm
