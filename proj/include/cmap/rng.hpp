#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cmap {

// Deterministic RNG used everywhere randomness is needed. std::mt19937_64 is
// fully specified by the standard, and the uniform/gaussian transforms below
// are written out explicitly so that the stream of variates is identical on
// every platform (std::uniform_real_distribution and friends are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        return engine_() % n;
    }

    // Box-Muller. Consumes exactly two engine draws per call.
    double gaussian() {
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace cmap
