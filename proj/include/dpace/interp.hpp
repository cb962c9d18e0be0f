#pragma once

// Kaiser-windowed sinc interpolation for fractional-sample access. Samples
// outside the series count as zero, matching the zero-extension convention
// used throughout the estimator.

#include <array>
#include <cmath>

#include "dpace/common.hpp"

namespace dpace {

// Modified Bessel function of the first kind, order zero (power series).
inline double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    double x2 = x * x / 4.0;
    for (int k = 1; k < 64; ++k) {
        term *= x2 / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

struct SincInterpolator {
    int taps = 8;
    double beta = 8.0;
    double i0_beta = bessel_i0(8.0);

    SincInterpolator() = default;
    SincInterpolator(int taps_, double beta_) : taps(taps_), beta(beta_), i0_beta(bessel_i0(beta_)) {
        if (taps < 2 || taps % 2 != 0) throw DataError("interp: taps must be even and >= 2");
        if (beta < 0.0) throw DataError("interp: beta must be >= 0");
    }

    double window(double d) const {
        double u = d / (taps / 2.0);
        if (std::abs(u) > 1.0) return 0.0;
        return bessel_i0(beta * std::sqrt(1.0 - u * u)) / i0_beta;
    }

    // Kernel weights for fractional offset frac in [0,1); tap i addresses
    // sample floor(pos) + i - taps/2 + 1.
    std::vector<double> weights(double frac) const {
        std::vector<double> w(taps);
        double sinf = std::sin(kPi * frac);  // sin(pi*(frac - t)) = +/- sin(pi*frac)
        for (int t = 0; t < taps; ++t) {
            int off = t - taps / 2 + 1;
            double d = frac - off;
            double sinc;
            if (d == 0.0) {
                sinc = 1.0;
            } else {
                double sgn = (off % 2 == 0) ? 1.0 : -1.0;
                sinc = sgn * sinf / (kPi * d);
            }
            w[t] = sinc * window(d);
        }
        return w;
    }

    cplx at(std::span<const cplx> x, double pos) const {
        double fl = std::floor(pos);
        double frac = pos - fl;
        long n0 = static_cast<long>(fl);
        long n = static_cast<long>(x.size());
        if (frac == 0.0) {
            return (n0 >= 0 && n0 < n) ? x[static_cast<std::size_t>(n0)] : cplx(0.0, 0.0);
        }
        std::vector<double> w = weights(frac);
        cplx acc(0.0, 0.0);
        for (int t = 0; t < taps; ++t) {
            long k = n0 + t - taps / 2 + 1;
            if (k >= 0 && k < n) acc += x[static_cast<std::size_t>(k)] * w[t];
        }
        return acc;
    }

    // Evaluates x at n0+shift for every n0; constant fractional offset, so the
    // kernel is built once.
    cvec shifted(std::span<const cplx> x, double shift) const {
        cvec out(x.size(), cplx(0.0, 0.0));
        double fl = std::floor(shift);
        double frac = shift - fl;
        long base = static_cast<long>(fl);
        long n = static_cast<long>(x.size());
        if (frac == 0.0) {
            for (long i = 0; i < n; ++i) {
                long k = i + base;
                if (k >= 0 && k < n) out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(k)];
            }
            return out;
        }
        std::vector<double> w = weights(frac);
        for (long i = 0; i < n; ++i) {
            cplx acc(0.0, 0.0);
            for (int t = 0; t < taps; ++t) {
                long k = i + base + t - taps / 2 + 1;
                if (k >= 0 && k < n) acc += x[static_cast<std::size_t>(k)] * w[t];
            }
            out[static_cast<std::size_t>(i)] = acc;
        }
        return out;
    }
};

}  // namespace dpace
