#pragma once

#include <cmath>
#include <cstdint>

namespace ncmart {

/// Deterministic 64-bit generator (splitmix64). Implementation-defined
/// distributions from <random> would tie frozen baselines to a particular
/// standard library, so uniforms and Gaussians are generated by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

    /// Sub-seed derivation for per-trial streams: seed xor trial index,
    /// re-mixed through splitmix64 once.
    static std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
        Rng g(seed ^ (0x2545f4914f6cdd1dULL * (index + 1)));
        return g.next_u64();
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace ncmart
