#ifndef LATGAUSS_RNG_HPP
#define LATGAUSS_RNG_HPP

#include <cmath>
#include <cstdint>

#include "latgauss/common.hpp"

namespace latgauss {

// pure mixing hash (state copy)
inline uint64_t mix64(uint64_t x);

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t x) { return splitmix64(x); }

// Seeded xoshiro256++ generator. All distributions are implemented by hand
// on top of the raw 64-bit stream so that output is identical across
// platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (int i = 0; i < 4; ++i) s_[i] = splitmix64(sm);
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased uniform integer in [0, bound).
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform in [0, 1) with 63 significant bits.
    real_t uniform01() {
        return static_cast<real_t>(next_u64() >> 1) * 0x1p-63L;
    }

    // Standard normal via Box-Muller on our own uniforms.
    real_t normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        real_t u = 0;
        while (u == 0) u = uniform01();
        real_t v = uniform01();
        real_t r = std::sqrt(-2.0L * std::log(u));
        real_t a = 2.0L * kPi * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Independent child stream; deterministic in (parent seed, id).
    static Rng substream(uint64_t seed, uint64_t id) {
        uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + id * 0x3c6ef372fe94f82bULL);
        splitmix64(s);
        return Rng(splitmix64(s));
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    real_t spare_ = 0;
    bool have_spare_ = false;
};

}  // namespace latgauss

#endif
