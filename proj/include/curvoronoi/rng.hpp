#pragma once

#include <cmath>
#include <cstdint>

#include "curvoronoi/error.hpp"

namespace curvo {

// All randomness in the library flows through this generator so that runs are
// reproducible bit for bit across platforms.  The core is xoshiro256** seeded
// through splitmix64; uniform doubles are built from the top 53 bits, normals
// via Box-Muller, Poisson via Knuth's product method for small means and
// Hormann's PTRS transformed rejection for large means.  None of these depend
// on implementation-defined <random> distributions.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed splitting: stream i of a master seed.  Never use master+i directly;
// mixing through splitmix64 keeps streams statistically independent.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (int i = 0; i < 4; ++i) s_[i] = splitmix64(sm);
        // xoshiro must not start from the all-zero state
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
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
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0,1], handy when a log follows
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0) || !std::isfinite(mean))
            throw InputError("poisson: mean must be finite and nonnegative");
        if (mean == 0.0) return 0;
        if (mean < 30.0) return poisson_knuth(mean);
        return poisson_ptrs(mean);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform_pos();
        while (prod > limit) {
            ++k;
            prod *= uniform_pos();
        }
        return k;
    }

    // Hormann (1993), "The transformed rejection method for generating Poisson
    // random variables", algorithm PTRS.  Exact for mean >= 10.
    std::uint64_t poisson_ptrs(double mean) {
        const double log_mean = std::log(mean);
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform_pos();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            double k = kf;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0))
                return static_cast<std::uint64_t>(kf);
        }
    }

    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace curvo
