#pragma once

#include <cstdint>
#include <initializer_list>

namespace dppmom::rng {

// Reproducibility contract: every randomized routine takes a (seed, stream)
// pair and derives an independent generator state from it with the SplitMix64
// finalizer (Steele/Lea/Flood 2014). The stream generator is xoshiro256++
// (Blackman & Vigna 2019). Both are fixed algorithms, so identical inputs
// give identical output sequences on every platform.

struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // trial index / substream id
};

/// SplitMix64 finalizer: the bijective avalanche step.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// One SplitMix64 step: advances x by the golden-ratio increment and mixes.
inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    return mix64(x);
}

/// Folds an ordered tuple of 64-bit parts into one key.
/// Used to hash (base, N, n, trial, role) so adding grid cells never
/// perturbs the streams of existing ones.
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0xD1B54A32D192ED03ull;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ p) + 0x9E3779B97F4A7C15ull;
    }
    return mix64(h);
}

class Xoshiro256pp {
  public:
    static Xoshiro256pp from_key(std::uint64_t key) {
        Xoshiro256pp g;
        for (auto& w : g.s_) w = splitmix64_next(key);
        return g;
    }

    static Xoshiro256pp from_seed(const RngSeed& rs) {
        return from_key(derive_key({rs.seed, rs.stream}));
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

    /// Uniform double in [0,1) built from the top 53 bits; no libm involved.
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound). Uses the 53-bit uniform; the bias is
    /// below 2^-40 for the bounds used here (< 2^13).
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform01() * double(bound));
    }

    /// Fair sign flip.
    int sign() { return (next() >> 63) ? 1 : -1; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4] = {1, 2, 3, 4};
};

} // namespace dppmom::rng
