#pragma once

#include <cstdint>

namespace snt {

// Counter-based stream RNG (splitmix64 core). Streams derived from
// (seed, instance, shot) are independent and reproducible regardless of
// execution order or thread assignment.
struct Rng {
    std::uint64_t state = 0;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static Rng stream(std::uint64_t seed, std::uint64_t instance, std::uint64_t shot) {
        Rng r;
        r.state = mix(mix(mix(seed) ^ instance) ^ shot);
        return r;
    }

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace snt
