#pragma once

#include <cmath>
#include <cstdint>

namespace mixfit {

/// Name recorded in fit metadata so results can be tied to the generator.
inline constexpr const char* kRngAlgorithm = "splitmix64";

/// SplitMix64 generator (Steele, Lea & Flood; public-domain reference
/// implementation). Output i is mix(seed + (i+1) * 2^64/phi), so the stream
/// is a pure function of the seed and fully reproducible across platforms.
/// All sampling transforms below are written out explicitly for the same
/// reason; std::*_distribution is implementation-defined and is not used.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; never returns 0, safe as a log() argument.
    double uniform01_pos() { return 1.0 - uniform01(); }

    /// Uniform on [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform on (a, b].
    double uniform_open_closed(double a, double b) { return a + (b - a) * uniform01_pos(); }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        const double u1 = uniform01_pos();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Poisson count. Knuth's product-of-uniforms method for the base rate;
    /// larger rates use Poisson additivity in chunks of 30 so the exp()
    /// threshold never underflows. Exact distribution, O(lambda) uniforms.
    long long poisson(double lambda) {
        long long total = 0;
        while (lambda > 30.0) {
            total += poisson_knuth(30.0);
            lambda -= 30.0;
        }
        return total + poisson_knuth(lambda);
    }

    /// The i-th output of splitmix64 seeded with `seed`; used to derive
    /// independent child streams (restart r of a fit uses substream(seed, r)).
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    long long poisson_knuth(double lambda) {
        const double threshold = std::exp(-lambda);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01_pos();
        } while (p > threshold);
        return k - 1;
    }

    std::uint64_t state_;
};

}  // namespace mixfit
