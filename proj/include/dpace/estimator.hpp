#pragma once

// Velocity-acceleration estimation for one sanitized window:
// symmetric lag products (PSIA), keystone-style per-lag resampling to
// decouple the time-lag phase coupling, then a zero-padded 2D transform
// whose bins map to physical velocity and acceleration.
//
// The per-lag resampling is performed symmetrically about the window
// center, so reported velocities are referenced to mid-window time.

#include <algorithm>
#include <cmath>

#include "dpace/fft.hpp"
#include "dpace/interp.hpp"
#include "dpace/preprocess.hpp"

namespace dpace {

struct EstimatorConfig {
    double s = 1.0;            // scaling factor
    double t_d_s = 0.0;        // constant lag offset; 0 selects W*dt/4
    int lag_count = 0;         // number of tau lags; 0 selects W/2
    int pad_t = 0;             // t-axis DFT length; 0 selects next_pow2(4*W)
    int pad_tau = 0;           // tau-axis DFT length; 0 selects next_pow2(4*lag_count)
    double f_ref_hz = 0.0;     // bin-mapping frequency; 0 selects the window's own f_hz
    double c_mps = 3e8;
    int interp_taps = 8;
    double interp_beta = 8.0;
    bool keep_complex = false; // retain the complex plane alongside magnitudes

    struct Resolved {
        double s, t_d, dt, f_ref, c;
        int w, lag_count, pad_t, pad_tau;
    };

    Resolved resolve(std::size_t w, double dt, double window_f_hz) const {
        if (w < 8) throw DataError("estimator: window too short (W >= 8)");
        Resolved r;
        r.w = static_cast<int>(w);
        r.dt = dt;
        r.s = s;
        r.t_d = (t_d_s > 0.0) ? t_d_s : static_cast<double>(w) * dt / 4.0;
        r.lag_count = (lag_count > 0) ? lag_count : r.w / 2;
        r.pad_t = (pad_t > 0) ? pad_t : static_cast<int>(next_pow2(4 * w));
        r.pad_tau = (pad_tau > 0) ? pad_tau : static_cast<int>(next_pow2(4 * static_cast<std::size_t>(r.lag_count)));
        r.f_ref = (f_ref_hz > 0.0) ? f_ref_hz : window_f_hz;
        r.c = c_mps;
        if (r.lag_count > r.w / 2) throw DataError("insufficient window");
        if (r.s <= 0.0 || r.t_d <= 0.0) throw DataError("invalid scaling geometry");
        if (r.pad_t < r.w || r.pad_tau < r.lag_count) throw DataError("estimator: pad smaller than axis");
        if (r.f_ref <= 0.0) throw DataError("estimator: f_ref must be > 0");
        return r;
    }
};

// Complex surface over (lag row, time column). Before scaling t_step is the
// packet interval; after scaling it is the resampled grid step (s^2 units).
struct PsiaSurface {
    int n_tau = 0;
    int n_t = 0;
    double t_step = 0.0;
    double tau_step = 0.0;   // lag grid spacing (= dt)
    double u0 = 0.0;         // first lag value tau_0 + t_d
    double f_ref = 0.0;      // resolved bin-mapping frequency
    bool scaled = false;
    cvec values;             // row-major [tau][t]

    cplx& at(int tau, int t) { return values[static_cast<std::size_t>(tau) * n_t + t]; }
    const cplx& at(int tau, int t) const { return values[static_cast<std::size_t>(tau) * n_t + t]; }
    double u(int tau) const { return u0 + tau * tau_step; }
};

inline PsiaSurface psia(const SanitizedWindow& win, const EstimatorConfig& cfg) {
    const auto r = cfg.resolve(win.length(), win.dt_s, win.f_hz);
    const SincInterpolator interp(cfg.interp_taps, cfg.interp_beta);
    PsiaSurface surf;
    surf.n_tau = r.lag_count;
    surf.n_t = r.w;
    surf.t_step = r.dt;
    surf.tau_step = r.dt;
    surf.u0 = r.t_d;
    surf.f_ref = r.f_ref;
    surf.values.assign(static_cast<std::size_t>(r.lag_count) * r.w, cplx(0.0, 0.0));
    for (int j = 0; j < r.lag_count; ++j) {
        const double h = surf.u(j) / (2.0 * r.dt);  // half-offset in samples
        const cvec jp = interp.shifted(win.samples, +h);
        const cvec jm = interp.shifted(win.samples, -h);
        const int lo = static_cast<int>(std::ceil(h));
        const int hi = static_cast<int>(std::floor(r.w - 1 - h));
        for (int i = std::max(lo, 0); i <= hi; ++i)
            surf.at(j, i) = jp[static_cast<std::size_t>(i)] * std::conj(jm[static_cast<std::size_t>(i)]);
    }
    return surf;
}

// Per-lag time resampling output(t, tau) = input(t / (s*(tau+t_d)), tau),
// evaluated on a common grid anchored at the largest lag and symmetric
// about the window center.
inline PsiaSurface scale(const PsiaSurface& in, const EstimatorConfig& cfg) {
    if (in.scaled) throw DataError("scale: surface already scaled");
    if (cfg.s <= 0.0 || in.u0 <= 0.0) throw DataError("invalid scaling geometry");
    const SincInterpolator interp(cfg.interp_taps, cfg.interp_beta);
    const double u_max = in.u(in.n_tau - 1);
    PsiaSurface out = in;
    out.scaled = true;
    out.t_step = in.t_step * cfg.s * u_max;
    const double ctr = (in.n_t - 1) / 2.0;
    cvec row(static_cast<std::size_t>(in.n_t));
    for (int j = 0; j < in.n_tau; ++j) {
        const double uj = in.u(j);
        if (uj <= 0.0) throw DataError("invalid scaling geometry");
        const double ratio = u_max / uj;
        std::span<const cplx> src(in.values.data() + static_cast<std::size_t>(j) * in.n_t,
                                  static_cast<std::size_t>(in.n_t));
        for (int i = 0; i < in.n_t; ++i) {
            const double pos = ctr + (i - ctr) * ratio;
            row[static_cast<std::size_t>(i)] =
                (pos < 0.0 || pos > in.n_t - 1) ? cplx(0.0, 0.0) : interp.at(src, pos);
        }
        std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::size_t>(j) * in.n_t);
    }
    return out;
}

struct VaPlane {
    int n_v = 0;  // rows
    int n_a = 0;  // cols
    double v0 = 0.0, v_step = 0.0;
    double a0 = 0.0, a_step = 0.0;
    rvec mags;    // row-major [v][a]
    cvec values;  // populated when keep_complex is set

    double& mag(int iv, int ia) { return mags[static_cast<std::size_t>(iv) * n_a + ia]; }
    double mag(int iv, int ia) const { return mags[static_cast<std::size_t>(iv) * n_a + ia]; }
    double v_at(double iv) const { return v0 + iv * v_step; }
    double a_at(double ia) const { return a0 + ia * a_step; }
};

inline VaPlane va_transform(const PsiaSurface& surf, const EstimatorConfig& cfg) {
    if (!surf.scaled) throw DataError("va_transform: surface must be scaled first");
    int pad_tau = (cfg.pad_tau > 0) ? cfg.pad_tau : static_cast<int>(next_pow2(4 * static_cast<std::size_t>(surf.n_tau)));
    int pad_t = (cfg.pad_t > 0) ? cfg.pad_t : static_cast<int>(next_pow2(4 * static_cast<std::size_t>(surf.n_t)));
    if (pad_tau < surf.n_tau || pad_t < surf.n_t) throw DataError("estimator: pad smaller than axis");
    const double f_ref = (surf.f_ref > 0.0) ? surf.f_ref : cfg.f_ref_hz;
    if (f_ref <= 0.0) throw DataError("va_transform: f_ref unset");

    // Conjugate-kernel DFT: a component exp(-j*2*pi*f*x) lands at bin +f.
    cvec g = fft2(surf.values, static_cast<std::size_t>(surf.n_tau), static_cast<std::size_t>(surf.n_t),
                  static_cast<std::size_t>(pad_tau), static_cast<std::size_t>(pad_t), +1);

    VaPlane plane;
    plane.n_v = pad_tau;
    plane.n_a = pad_t;
    plane.v_step = cfg.c_mps / (2.0 * f_ref) / (pad_tau * surf.tau_step);
    plane.a_step = cfg.s * cfg.c_mps / (2.0 * f_ref) / (pad_t * surf.t_step);
    plane.v0 = -plane.v_step * (pad_tau / 2);
    plane.a0 = -plane.a_step * (pad_t / 2);
    plane.mags.resize(static_cast<std::size_t>(pad_tau) * pad_t);
    if (cfg.keep_complex) plane.values.resize(plane.mags.size());

    // fftshift both axes so the stored grid runs from negative to positive.
    for (int r = 0; r < pad_tau; ++r) {
        const int rs = (r + pad_tau / 2) % pad_tau;
        for (int c = 0; c < pad_t; ++c) {
            const int cs = (c + pad_t / 2) % pad_t;
            const cplx val = g[static_cast<std::size_t>(rs) * pad_t + cs];
            plane.mags[static_cast<std::size_t>(r) * pad_t + c] = std::abs(val);
            if (cfg.keep_complex) plane.values[static_cast<std::size_t>(r) * pad_t + c] = val;
        }
    }
    return plane;
}

struct VaPeak {
    double v_mps = 0.0;
    double a_mps2 = 0.0;
    double magnitude = 0.0;
    int row = 0, col = 0;               // plane bin of the raw maximum
    double row_refined = 0.0, col_refined = 0.0;
};

namespace detail {

inline double parabolic_offset(double m1, double m2, double m3) {
    const double den = m1 - 2.0 * m2 + m3;
    if (den == 0.0) return 0.0;
    double d = 0.5 * (m1 - m3) / den;
    return std::clamp(d, -0.5, 0.5);
}

inline VaPeak refine_peak(const VaPlane& plane, int row, int col) {
    VaPeak pk;
    pk.row = row;
    pk.col = col;
    pk.magnitude = plane.mag(row, col);
    double dr = 0.0, dc = 0.0;
    if (row > 0 && row + 1 < plane.n_v)
        dr = parabolic_offset(plane.mag(row - 1, col), plane.mag(row, col), plane.mag(row + 1, col));
    if (col > 0 && col + 1 < plane.n_a)
        dc = parabolic_offset(plane.mag(row, col - 1), plane.mag(row, col), plane.mag(row, col + 1));
    pk.row_refined = row + dr;
    pk.col_refined = col + dc;
    pk.v_mps = plane.v_at(pk.row_refined);
    pk.a_mps2 = plane.a_at(pk.col_refined);
    return pk;
}

}  // namespace detail

// Up to max_targets local maxima, strongest first, each at least
// min_separation bins (Chebyshev) from previously accepted peaks. Ties break
// toward the lowest (row, col).
inline std::vector<VaPeak> find_peaks(const VaPlane& plane, int max_targets, int min_separation = 4) {
    if (max_targets < 1) throw DataError("find_peaks: max_targets must be >= 1");
    std::vector<std::pair<double, std::pair<int, int>>> cand;
    for (int r = 0; r < plane.n_v; ++r) {
        for (int c = 0; c < plane.n_a; ++c) {
            const double m = plane.mag(r, c);
            if (m <= 0.0) continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= plane.n_v || cc < 0 || cc >= plane.n_a) continue;
                    if (plane.mag(rr, cc) > m) { is_max = false; break; }
                }
            }
            if (is_max) cand.push_back({m, {r, c}});
        }
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<VaPeak> peaks;
    for (const auto& [m, rc] : cand) {
        if (static_cast<int>(peaks.size()) >= max_targets) break;
        bool ok = true;
        for (const VaPeak& p : peaks) {
            if (std::max(std::abs(p.row - rc.first), std::abs(p.col - rc.second)) < min_separation) {
                ok = false;
                break;
            }
        }
        if (ok) peaks.push_back(detail::refine_peak(plane, rc.first, rc.second));
    }
    return peaks;
}

inline VaPlane window_plane(const SanitizedWindow& win, const EstimatorConfig& cfg) {
    return va_transform(scale(psia(win, cfg), cfg), cfg);
}

// Magnitude average of the per-(antenna, subcarrier) planes.
inline VaPlane averaged_plane(const std::vector<SanitizedWindow>& windows, const EstimatorConfig& cfg) {
    if (windows.empty()) throw DataError("averaged_plane: no windows");
    VaPlane acc = window_plane(windows.front(), cfg);
    for (std::size_t i = 1; i < windows.size(); ++i) {
        VaPlane p = window_plane(windows[i], cfg);
        if (p.mags.size() != acc.mags.size()) throw DataError("averaged_plane: mismatched plane shapes");
        for (std::size_t k = 0; k < acc.mags.size(); ++k) acc.mags[k] += p.mags[k];
    }
    const double inv = 1.0 / static_cast<double>(windows.size());
    for (double& m : acc.mags) m *= inv;
    return acc;
}

struct EstimateSet {
    std::vector<VaPeak> targets;  // strongest first
    bool underpopulated = false;
};

// Step-wise estimation-elimination: take the strongest peak of the averaged
// plane, reconstruct that component per window with a least-squares complex
// amplitude, subtract, and repeat.
inline EstimateSet estimate_eliminate(std::vector<SanitizedWindow> windows, const EstimatorConfig& cfg,
                                      int n_targets, double residual_energy_ratio = 1e-9) {
    if (n_targets < 1) throw DataError("estimate_eliminate: n_targets must be >= 1");
    if (windows.empty()) throw DataError("estimate_eliminate: no windows");
    EstimateSet out;
    double e0 = 0.0;
    for (const SanitizedWindow& w : windows) e0 += energy(w.samples);
    const std::size_t wlen = windows.front().length();
    const double dt = windows.front().dt_s;
    const double t_c = (static_cast<double>(wlen) - 1.0) / 2.0 * dt;

    for (int it = 0; it < n_targets; ++it) {
        if (it > 0) {
            double er = 0.0;
            for (const SanitizedWindow& w : windows) er += energy(w.samples);
            if (er <= residual_energy_ratio * e0) {
                out.underpopulated = true;
                break;
            }
        }
        VaPlane plane = averaged_plane(windows, cfg);
        std::vector<VaPeak> pk = find_peaks(plane, 1);
        if (pk.empty()) {
            out.underpopulated = true;
            break;
        }
        out.targets.push_back(pk.front());
        if (it + 1 == n_targets) break;

        // Reported v is mid-window; rebuild the window-start phase model.
        const double v_hat = pk.front().v_mps;
        const double a_hat = pk.front().a_mps2;
        const double v0 = v_hat - a_hat * t_c;
        for (SanitizedWindow& w : windows) {
            cvec model(wlen);
            cplx mean(0.0, 0.0);
            for (std::size_t n = 0; n < wlen; ++n) {
                const double tn = static_cast<double>(n) * dt;
                const double l = v0 * tn + 0.5 * a_hat * tn * tn;
                model[n] = dynamic_phase(w.f_hz, l, cfg.c_mps);
                mean += model[n];
            }
            mean /= static_cast<double>(wlen);
            cplx num(0.0, 0.0);
            double den = 0.0;
            for (std::size_t n = 0; n < wlen; ++n) {
                model[n] -= mean;  // elimination acts on DC-nulled windows
                num += std::conj(model[n]) * w.samples[n];
                den += std::norm(model[n]);
            }
            if (den <= 0.0) continue;
            const cplx beta = num / den;
            for (std::size_t n = 0; n < wlen; ++n) w.samples[n] -= beta * model[n];
        }
    }
    return out;
}

}  // namespace dpace
