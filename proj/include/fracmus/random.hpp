#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fracmus/family.hpp"

namespace fracmus {

// Seeded generator; all library sampling goes through this type so that a
// fixed seed reproduces runs bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [a, b). Uses the raw 53-bit draw so the stream does not
    // depend on the standard library's distribution implementation.
    double uniform(double a = 0.0, double b = 1.0) {
        double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    }
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    Point point(const Region& r) {
        Point x{0.0, 0.0};
        for (int k = 0; k < r.dim; ++k) x[k] = uniform(r.lower[k], r.upper[k]);
        return x;
    }
    std::uint64_t next() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace fracmus
