#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace monoqt {

// Hand-rolled splitmix64 generator with a Box-Muller normal source.
// std::mt19937 + std::normal_distribution would be simpler, but the
// distribution's output sequence is implementation-defined; results here must
// be bit-identical across standard libraries and across thread counts, so both
// the generator and the transform are fixed explicitly.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed), cached_(false), cache_(0.0) {}

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller; second value of each pair is cached
    double normal() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        double u1 = uniform();
        // avoid log(0); shift into (0,1]
        u1 = 1.0 - u1;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.28318530717958647692 * uniform();
        cache_ = r * std::sin(t);
        cached_ = true;
        return r * std::cos(t);
    }

    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

  private:
    bool cached_;
    double cache_;
};

// Counter-based stream derivation: child seed for (master, index). Used so the
// i-th sample/restart gets the same randomness no matter how work is scheduled.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t x = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    // two finalizer rounds decorrelate adjacent indices
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace monoqt
