#pragma once

#include <cstdint>

namespace msta {

// splitmix64: tiny seedable generator with a fixed cross-platform stream.
// All stochastic decisions in the optimizer draw from one serial instance,
// so replay with the same seed is bit-identical regardless of build host.
struct rng64 {
    std::uint64_t state;

    explicit rng64(std::uint64_t seed = 0) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform over [0, n) without modulo bias (rejection on the tail)
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

    // uniform in [0, 1) with 53-bit resolution
    double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

} // namespace msta
