#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "swpm/vec3.hpp"

namespace swpm {

/// splitmix64 step, used for seed expansion and ensemble substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64Once(std::uint64_t x) { return splitmix64(x); }

/// xoshiro256++ generator, seeded through splitmix64. One instance per
/// ensemble; identical seeds give identical draw sequences.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    /// Substream for ensemble i, independent of but determined by the base seed.
    static RandomSource forEnsemble(std::uint64_t seed, std::uint64_t index) {
        return RandomSource(seed ^ splitmix64Once(index));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t nextU64() {
        std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0,1).
    double nextDouble() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0,1); safe under log().
    double nextOpenDouble() {
        return (static_cast<double>(nextU64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Lemire reduction; n must be > 0.
    std::uint64_t nextIndex(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(nextU64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller (exact distribution, no CLT shortcut).
    double nextNormal() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u1 = nextOpenDouble();
        double u2 = nextDouble();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        haveSpare_ = true;
        return r * std::cos(phi);
    }

    Vec3 nextNormal3() { return {nextNormal(), nextNormal(), nextNormal()}; }

    /// Uniform direction on the unit sphere.
    Vec3 nextUnitSphere() {
        double z = 2.0 * nextDouble() - 1.0;
        double phi = 2.0 * std::numbers::pi * nextDouble();
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t seed_;
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool haveSpare_ = false;
};

}  // namespace swpm
