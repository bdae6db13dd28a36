#ifndef CROSSWALK_RNG_HPP
#define CROSSWALK_RNG_HPP

#include <array>
#include <cstdint>

namespace crosswalk {

/// SplitMix64 step (Vigna, public domain reference constants). Used to
/// expand a 64-bit seed into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded via SplitMix64.
///
/// The generator is pinned by name so that every published number can be
/// reproduced bit-for-bit from the seed echoed in the result envelope,
/// in this implementation or any other language that follows the same
/// reference algorithm. Replica k of an experiment with seed s uses its
/// own stream seeded with s + k (wrapping 64-bit addition).
///
/// Uniform doubles take the top 53 bits of one 64-bit output, so draws
/// never depend on platform-specific distribution code.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// True with probability p. Exact at p = 0 and p = 1.
    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace crosswalk

#endif // CROSSWALK_RNG_HPP
