#pragma once

#include <cmath>
#include <cstdint>

namespace padmm {

/// Deterministic 64-bit linear congruential generator (Knuth MMIX constants:
/// multiplier 6364136223846793005, increment 1442695040888963407, modulus 2^64).
/// Used for all randomized generation so runs are bit-reproducible across
/// platforms with the same floating-point environment.
class Lcg64 {
 public:
    explicit Lcg64(std::uint64_t seed) : state_(seed ^ 0x9E3779B97F4A7C15ULL) {
        // burn a few states so close seeds decorrelate
        for (int i = 0; i < 4; ++i) next_u64();
    }

    std::uint64_t next_u64() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    /// Uniform on [0,1) with 53 bits of precision.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double a, double b) { return a + (b - a) * next_uniform(); }

    /// Standard normal via Box-Muller; the spare value is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        while (u1 <= 1e-300) u1 = next_uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

 private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace padmm
