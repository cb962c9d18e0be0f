#pragma once

// Deterministic random source. mt19937_64 output is pinned by the standard;
// the value mappings live here so streams do not depend on the standard
// library's distribution implementations.

#include <cmath>
#include <random>

#include "dpace/common.hpp"

namespace dpace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    // Circularly symmetric complex normal with E|z|^2 = power.
    cplx cnormal(double power) {
        double s = std::sqrt(power / 2.0);
        return cplx(s * normal(), s * normal());
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dpace
