#pragma once

#include <cstdint>

namespace corrperc {

// Deterministic RNG used everywhere randomness is needed. std::mt19937_64 is
// fully specified by the standard, but the std distributions are not, so the
// uniform draws are implemented here to make every sampled graph reproducible
// across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {
        // Warm up: xorshift-multiply mixing needs a few rounds to decorrelate
        // adjacent seeds.
        for (int i = 0; i < 4; ++i)
            next();
    }

    std::uint64_t next() {
        // splitmix64 step: a counter-based generator, so per-replica streams
        // derived from (seed, index) hashes never overlap in practice.
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0. Rejection-free Lemire reduction with a
    // retry loop for exactness.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_;
};

// Stateless mix of a master seed with stream indices; used to derive
// independent per-replica streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = seed;
    z ^= 0x9E3779B97F4A7C15ull * (a + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z ^= 0xC2B2AE3D27D4EB4Full * (b + 1);
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace corrperc
