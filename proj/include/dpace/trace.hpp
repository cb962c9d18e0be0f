#pragma once

// Sliding-window estimation over a CSI stream: one (v, a) sample per window
// per target, nearest-neighbor association across windows, then low-pass and
// trend-filter smoothing.

#include "dpace/estimator.hpp"
#include "dpace/filters.hpp"
#include "dpace/threadpool.hpp"
#include "dpace/trendfilter.hpp"

namespace dpace {

struct TraceConfig {
    int w = 120;
    int stride = 0;                 // 0 selects W/4
    int n_targets = 1;
    double cutoff_hz = 10.0;        // clamped below the trace Nyquist when needed
    double xi = -1.0;               // <0 selects 10 x median |successive difference|
    int max_fused_subcarriers = 16; // evenly spaced subset per antenna pair
    int guard_bins = 0;             // extra DC-null guard band
    double residual_energy_ratio = 1e-9;
    EstimatorConfig estimator;

    int effective_stride() const { return stride > 0 ? stride : std::max(1, w / 4); }
};

struct AccelTrace {
    int target_id = 0;
    rvec times_s;   // window-center times
    rvec a_raw;
    rvec v_raw;     // mid-window velocity, used to seed distance integration
    rvec a_smooth;  // filled by smooth_trace

    std::size_t size() const { return times_s.size(); }
};

// Evenly spaced subcarrier subset used for plane fusion.
inline std::vector<int> fused_subcarriers(int k_total, int max_count) {
    const int n = std::min(k_total, std::max(1, max_count));
    std::vector<int> ks;
    ks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ks.push_back(static_cast<int>((static_cast<long>(i) * k_total) / n));
    return ks;
}

inline std::vector<SanitizedWindow> windows_at(const SanitizedStream& ss, std::size_t start,
                                               const TraceConfig& cfg) {
    std::vector<SanitizedWindow> ws;
    const int pairs = ss.frames.front().n_pairs;
    const std::vector<int> ks = fused_subcarriers(ss.frames.front().n_subcarriers, cfg.max_fused_subcarriers);
    for (int p = 0; p < pairs; ++p)
        for (int k : ks)
            ws.push_back(null_zero_frequency(window(ss, p, k, start, static_cast<std::size_t>(cfg.w)),
                                             cfg.guard_bins));
    return ws;
}

inline std::vector<AccelTrace> sliding_estimate(const CsiStream& stream, const TraceConfig& cfg) {
    if (cfg.n_targets < 1) throw DataError("sliding_estimate: n_targets must be >= 1");
    if (stream.size() < static_cast<std::size_t>(cfg.w)) throw DataError("sliding_estimate: stream shorter than window");
    const SanitizedStream ss = sanitize_stream(stream);
    const int stride = cfg.effective_stride();
    const std::size_t n_windows = (stream.size() - static_cast<std::size_t>(cfg.w)) / static_cast<std::size_t>(stride) + 1;
    const double dt = stream.radio.dt_s();
    const double t_center = (cfg.w - 1) / 2.0 * dt;

    // per-window estimates, computed independently and associated in order
    std::vector<std::vector<VaPeak>> raw(n_windows);
    parallel_for(n_windows, [&](std::size_t wi) {
        const std::size_t start = wi * static_cast<std::size_t>(stride);
        raw[wi] = estimate_eliminate(windows_at(ss, start, cfg), cfg.estimator, cfg.n_targets,
                                     cfg.residual_energy_ratio)
                      .targets;
    });

    std::vector<AccelTrace> traces(static_cast<std::size_t>(cfg.n_targets));
    for (int t = 0; t < cfg.n_targets; ++t) traces[static_cast<std::size_t>(t)].target_id = t;

    // normalization spans for the association metric
    const double v_span = 2.0 * stream.radio.c_mps / (2.0 * stream.radio.carrier_hz) * stream.radio.packet_rate_hz / 2.0;
    double a_span = 1.0;
    {
        EstimatorConfig::Resolved r = cfg.estimator.resolve(static_cast<std::size_t>(cfg.w), dt, stream.radio.carrier_hz);
        const double u_max = r.t_d + (r.lag_count - 1) * dt;
        a_span = stream.radio.c_mps / (2.0 * r.f_ref * dt * u_max);  // full a-axis width
    }

    std::vector<std::pair<double, double>> prev;  // per target
    for (std::size_t wi = 0; wi < n_windows; ++wi) {
        const double t_now = static_cast<double>(wi * static_cast<std::size_t>(stride)) * dt + t_center;
        std::vector<VaPeak>& est = raw[wi];
        std::vector<int> assign(est.size(), -1);
        if (prev.empty()) {
            for (std::size_t e = 0; e < est.size(); ++e) assign[e] = static_cast<int>(e);
        } else {
            // greedy nearest-neighbor in normalized (v, a) space against the
            // constant-acceleration prediction of each track
            const double dt_win = static_cast<double>(stride) * dt;
            std::vector<bool> used_t(prev.size(), false), used_e(est.size(), false);
            for (std::size_t round = 0; round < est.size(); ++round) {
                double best = 1e300;
                int be = -1, bt = -1;
                for (std::size_t e = 0; e < est.size(); ++e) {
                    if (used_e[e]) continue;
                    for (std::size_t t = 0; t < prev.size(); ++t) {
                        if (used_t[t]) continue;
                        const double v_pred = prev[t].first + prev[t].second * dt_win;
                        const double dv = (est[e].v_mps - v_pred) / v_span;
                        const double da = (est[e].a_mps2 - prev[t].second) / a_span;
                        const double dist = dv * dv + da * da;
                        if (dist < best) { best = dist; be = static_cast<int>(e); bt = static_cast<int>(t); }
                    }
                }
                if (be < 0) break;
                assign[static_cast<std::size_t>(be)] = bt;
                used_e[static_cast<std::size_t>(be)] = true;
                used_t[static_cast<std::size_t>(bt)] = true;
            }
        }
        if (prev.size() < static_cast<std::size_t>(cfg.n_targets))
            prev.resize(static_cast<std::size_t>(cfg.n_targets), {0.0, 0.0});
        for (std::size_t e = 0; e < est.size(); ++e) {
            const int tid = assign[e];
            if (tid < 0 || tid >= cfg.n_targets) continue;
            AccelTrace& tr = traces[static_cast<std::size_t>(tid)];
            tr.times_s.push_back(t_now);
            tr.a_raw.push_back(est[e].a_mps2);
            tr.v_raw.push_back(est[e].v_mps);
            prev[static_cast<std::size_t>(tid)] = {est[e].v_mps, est[e].a_mps2};
        }
        // targets with no estimate this window repeat their last sample so
        // traces stay uniformly sampled
        for (int t = 0; t < cfg.n_targets; ++t) {
            AccelTrace& tr = traces[static_cast<std::size_t>(t)];
            if (tr.times_s.size() < wi + 1) {
                tr.times_s.push_back(t_now);
                tr.a_raw.push_back(tr.a_raw.empty() ? 0.0 : tr.a_raw.back());
                tr.v_raw.push_back(tr.v_raw.empty() ? 0.0 : tr.v_raw.back());
            }
        }
    }
    return traces;
}

// Effective low-pass cutoff: the configured value when valid, otherwise just
// inside the trace Nyquist (the 10 Hz default exceeds Nyquist at coarse
// strides).
inline double effective_cutoff(double cutoff_hz, double trace_rate_hz) {
    return std::min(cutoff_hz, 0.45 * trace_rate_hz);
}

inline double default_xi(const rvec& a_raw) {
    if (a_raw.size() < 2) return 0.0;
    rvec d(a_raw.size() - 1);
    for (std::size_t i = 0; i + 1 < a_raw.size(); ++i) d[i] = std::abs(a_raw[i + 1] - a_raw[i]);
    std::sort(d.begin(), d.end());
    const double med = d[d.size() / 2];
    return 10.0 * med;
}

inline void smooth_trace(AccelTrace& tr, const TraceConfig& cfg, double trace_rate_hz) {
    if (tr.a_raw.size() < 3) {
        tr.a_smooth = tr.a_raw;
        return;
    }
    const rvec lp = lowpass(tr.a_raw, effective_cutoff(cfg.cutoff_hz, trace_rate_hz), trace_rate_hz);
    const double xi = cfg.xi >= 0.0 ? cfg.xi : default_xi(lp);
    tr.a_smooth = l1_trend(lp, xi);
}

}  // namespace dpace
