#pragma once

#include <cmath>
#include <cstdint>

namespace symvf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Stream derivation: mixes (root, a, b) into an independent seed so that
// per-candidate / per-generation streams are reproducible regardless of
// scheduling.
inline std::uint64_t derive_stream(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = root;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= b * 0xc2b2ae3d27d4eb4full;
    h ^= splitmix64(s);
    return h;
}

// xoshiro256++ with explicit, implementation-defined-free helpers on top.
// std::uniform_real_distribution et al. are not portable bit-for-bit, so we
// roll the few primitives we need.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // [0, n); n > 0
    int uniform_int(int n) {
        int k = static_cast<int>(uniform01() * n);
        return k < n ? k : n - 1;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller; consumes two uniforms per draw
    double normal(double mean = 0.0, double sigma = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(6.283185307179586477 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

} // namespace symvf
