#pragma once

// Zero-phase low-pass filtering for acceleration traces: Butterworth biquad
// cascade run forward-backward with odd-reflection padding and steady-state
// initial conditions.

#include <algorithm>
#include <cmath>

#include "dpace/common.hpp"

namespace dpace {

struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;  // y[n] = b0 x + b1 x1 + b2 x2 - a1 y1 - a2 y2
};

// Digital Butterworth low-pass via bilinear transform, order must be even.
inline std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs_hz) {
    if (order < 2 || order % 2 != 0) throw DataError("lowpass: order must be even and >= 2");
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs_hz / 2.0))
        throw DataError("lowpass: cutoff must lie in (0, fs/2)");
    const double warped = std::tan(kPi * cutoff_hz / fs_hz);
    std::vector<Biquad> sos;
    for (int k = 0; k < order / 2; ++k) {
        // analog pole pair at angle theta from the negative real axis
        const double theta = kPi * (2.0 * k + 1.0) / (2.0 * order);
        const double q = 2.0 * std::cos(theta);  // pair: s^2 + q*s + 1 (normalized)
        const double w2 = warped * warped;
        const double norm = 1.0 + q * warped + w2;
        Biquad s;
        s.b0 = w2 / norm;
        s.b1 = 2.0 * w2 / norm;
        s.b2 = w2 / norm;
        s.a1 = 2.0 * (w2 - 1.0) / norm;
        s.a2 = (1.0 - q * warped + w2) / norm;
        sos.push_back(s);
    }
    return sos;
}

// Complex frequency response of a cascade at normalized frequency f/fs.
inline cplx sos_response(const std::vector<Biquad>& sos, double f_norm) {
    const cplx z = std::polar(1.0, -kTwoPi * f_norm);
    cplx h(1.0, 0.0);
    for (const Biquad& s : sos) {
        h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (cplx(1.0, 0.0) + s.a1 * z + s.a2 * z * z);
    }
    return h;
}

namespace filterdetail {

// Steady-state filter state for a unit step (transposed direct form II).
inline std::pair<double, double> step_state(const Biquad& s) {
    const double h = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double s2 = s.b2 - s.a2 * h;
    const double s1 = s.b1 - s.a1 * h + s2;
    return {s1, s2};
}

inline void filt_inplace(const Biquad& s, rvec& x) {
    auto [z1i, z2i] = step_state(s);
    double z1 = z1i * x.front(), z2 = z2i * x.front();
    for (double& v : x) {
        const double in = v;
        const double out = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * out + z2;
        z2 = s.b2 * in - s.a2 * out;
        v = out;
    }
}

}  // namespace filterdetail

// Forward-backward filtering; exact zero phase, squared magnitude response.
inline rvec sosfiltfilt(const std::vector<Biquad>& sos, const rvec& x) {
    if (x.size() < 2) return x;
    const std::size_t pad = std::min(x.size() - 1, static_cast<std::size_t>(9 * sos.size() + 6));
    const std::size_t n = x.size();
    rvec ext(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) ext[i] = 2.0 * x[0] - x[pad - i];
    for (std::size_t i = 0; i < n; ++i) ext[pad + i] = x[i];
    for (std::size_t i = 0; i < pad; ++i) ext[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];
    for (const Biquad& s : sos) filterdetail::filt_inplace(s, ext);
    std::reverse(ext.begin(), ext.end());
    for (const Biquad& s : sos) filterdetail::filt_inplace(s, ext);
    std::reverse(ext.begin(), ext.end());
    return rvec(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

// Zero-phase Butterworth low-pass (order 4 per pass).
inline rvec lowpass(const rvec& x, double cutoff_hz, double fs_hz) {
    const std::vector<Biquad> sos = butterworth_lowpass(4, cutoff_hz, fs_hz);
    return sosfiltfilt(sos, x);
}

}  // namespace dpace
