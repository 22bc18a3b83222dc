#pragma once

#include <cstdint>

namespace cftlab {

// Reproducible RNG for trajectory sampling. Stream splitting rule: stream k of
// a run seeded with s is seeded by splitmix64 applied to (s, k). Trajectories
// draw from their own stream, so results do not depend on thread scheduling.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Hash of (seed, k); the k-th derived seed of a run.
inline std::uint64_t splitmix64_mix(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (k + 1));
    std::uint64_t a = splitmix64_next(s);
    return splitmix64_next(s) ^ a;
}

class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    /// Stream `stream_index` of the run seeded with `seed`.
    static Xoshiro256 stream(std::uint64_t seed, std::uint64_t stream_index) {
        return Xoshiro256(splitmix64_mix(seed, stream_index));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

}  // namespace cftlab
