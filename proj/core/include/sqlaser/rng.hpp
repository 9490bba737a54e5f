#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Deterministic random streams for the stochastic integrator. The generator
// and the normal transform are fixed here rather than taken from <random>
// because libstdc++'s distributions are not bit-stable across releases, and
// the regression tests pin exact trajectories.

namespace sqlaser {

// Stream-splitting mixer (Steele, Lea, Flood 2014). Used only to expand a
// user seed into independent xoshiro states, one per trajectory.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256++ (Blackman, Vigna 2019). Period 2^256 - 1, passes BigCrush.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 mixer(seed);
        for (auto& word : state_) word = mixer.next();
    }

    std::uint64_t next() {
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

    // Uniform in (0, 1): top 53 bits, offset by half an ulp so 0 is excluded
    // (the polar method takes a log of the radius).
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform in [-1, 1).
    double uniform_symmetric() {
        return static_cast<double>(static_cast<std::int64_t>(next()) >> 10) *
               0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Standard normals via the Marsaglia polar method. Caches the second deviate
// of each accepted pair.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = rng_.uniform_symmetric();
            v = rng_.uniform_symmetric();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        have_spare_ = true;
        return u * scale;
    }

    Xoshiro256pp& engine() { return rng_; }

private:
    Xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sqlaser
