#pragma once

#include <cstdint>
#include <cmath>

namespace mobmap {

// xoshiro256++ with splitmix64 seeding. Samplers take an explicit Rng so every
// statistical test is reproducible from its seed.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
        have_gauss_ = false;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }

    result_type operator()() {
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

    // uniform in [0,1)
    double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection-free-enough bounded draw
        unsigned __int128 m = (unsigned __int128)(*this)() * n;
        return std::uint64_t(m >> 64);
    }

    double gauss() {
        if (have_gauss_) {
            have_gauss_ = false;
            return gauss_;
        }
        double u1, u2, r2;
        do {
            u1 = 2.0 * uniform() - 1.0;
            u2 = 2.0 * uniform() - 1.0;
            r2 = u1 * u1 + u2 * u2;
        } while (r2 >= 1.0 || r2 == 0.0);
        double f = std::sqrt(-2.0 * std::log(r2) / r2);
        gauss_ = u2 * f;
        have_gauss_ = true;
        return u1 * f;
    }

    // derive an independent stream (for per-worker seeding)
    Rng split(std::uint64_t salt) {
        Rng r(((*this)() ^ (salt * 0x9e3779b97f4a7c15ULL)) + salt);
        return r;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
    bool have_gauss_ = false;
    double gauss_ = 0.0;
};

}  // namespace mobmap
