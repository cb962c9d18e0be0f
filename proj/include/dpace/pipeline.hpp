#pragma once

// End-to-end stage glue shared by the CLI and the test suites.

#include "dpace/classifier.hpp"
#include "dpace/config.hpp"
#include "dpace/trace.hpp"

namespace dpace {

struct TraceBundle {
    std::vector<AccelTrace> traces;
    double trace_rate_hz = 0.0;
};

inline TraceBundle run_traces(const CsiStream& stream, const TraceConfig& cfg) {
    TraceBundle out;
    out.trace_rate_hz = stream.radio.packet_rate_hz / cfg.effective_stride();
    out.traces = sliding_estimate(stream, cfg);
    for (AccelTrace& tr : out.traces) smooth_trace(tr, cfg, out.trace_rate_hz);
    return out;
}

struct SegmentedTrace {
    std::vector<std::size_t> peaks;
    std::vector<Segment> segments;
};

inline SegmentedTrace segment_trace(const AccelTrace& tr) {
    SegmentedTrace out;
    if (tr.a_smooth.size() >= 4) {
        out.peaks = ampd(tr.a_smooth);
        out.segments = segment(tr.a_smooth.size(), out.peaks);
    }
    return out;
}

// Feature vectors for one target's trace; segments shorter than 3 samples
// are merged forward so every remaining segment is statistically usable.
inline std::vector<FeatureVector> trace_features(const AccelTrace& tr, const SegmentedTrace& seg) {
    std::vector<Segment> usable;
    for (const Segment& s : seg.segments) {
        if (!usable.empty() && usable.back().end == s.start && s.length() < 3)
            usable.back().end = s.end;
        else if (s.length() >= 3)
            usable.push_back(s);
        else if (!usable.empty() && usable.back().end == s.start)
            usable.back().end = s.end;
    }
    std::vector<FeatureVector> fv = extract_features(tr.a_smooth, usable);
    for (FeatureVector& f : fv) {
        const Segment& s = usable[static_cast<std::size_t>(f.segment_index)];
        f.target_id = tr.target_id;
        f.t_begin_s = tr.times_s[s.start];
        f.t_end_s = tr.times_s[s.end - 1];
    }
    return fv;
}

inline bool overlaps(double b0, double e0, double b1, double e1) { return b0 < e1 && e0 > b1; }

// Marks features as fall (+1) / no-fall (-1) from labeled event intervals on
// the target's path.
inline void label_features(std::vector<FeatureVector>& features, const std::vector<ScenarioEvent>& events,
                           const std::vector<int>& path_of_target) {
    for (FeatureVector& f : features) {
        const int path = (f.target_id >= 0 && f.target_id < static_cast<int>(path_of_target.size()))
                             ? path_of_target[static_cast<std::size_t>(f.target_id)]
                             : -1;
        f.label = -1;
        for (const ScenarioEvent& e : events) {
            if (e.path == path && e.label == "fall" && overlaps(f.t_begin_s, f.t_end_s, e.start_s, e.end_s)) {
                f.label = +1;
                break;
            }
        }
    }
}

// Per-path ground-truth series sampled at arbitrary times.
struct TruthSeries {
    double dt_s = 0.0;
    std::vector<int> paths;
    std::vector<rvec> l, v, a;  // indexed [path][packet]

    static TruthSeries build(const GroundTruth& gt, double dt_s) {
        TruthSeries ts;
        ts.dt_s = dt_s;
        for (const GroundTruthRow& r : gt.rows) {
            std::size_t pi = 0;
            for (; pi < ts.paths.size(); ++pi)
                if (ts.paths[pi] == r.path) break;
            if (pi == ts.paths.size()) {
                ts.paths.push_back(r.path);
                ts.l.emplace_back();
                ts.v.emplace_back();
                ts.a.emplace_back();
            }
            if (ts.l[pi].size() <= r.packet) {
                ts.l[pi].resize(r.packet + 1);
                ts.v[pi].resize(r.packet + 1);
                ts.a[pi].resize(r.packet + 1);
            }
            ts.l[pi][r.packet] = r.dplc_m;
            ts.v[pi][r.packet] = r.v_mps;
            ts.a[pi][r.packet] = r.a_mps2;
        }
        return ts;
    }

    double sample(const rvec& series, double t_s) const {
        if (series.empty()) throw DataError("eval: empty ground-truth series");
        const long long idx = std::llround(t_s / dt_s);  // nearest packet
        const std::size_t i = static_cast<std::size_t>(std::clamp<long long>(
            idx, 0, static_cast<long long>(series.size()) - 1));
        return series[i];
    }
};

// Matches trace targets to dynamic paths by median (v, a) agreement over the
// trace; returns path id per target.
inline std::vector<int> map_targets_to_paths(const std::vector<AccelTrace>& traces, const TruthSeries& ts) {
    const std::size_t nt = traces.size(), np = ts.paths.size();
    std::vector<std::vector<double>> cost(nt, std::vector<double>(np, 0.0));
    for (std::size_t t = 0; t < nt; ++t) {
        for (std::size_t p = 0; p < np; ++p) {
            rvec d;
            for (std::size_t i = 0; i < traces[t].size(); ++i) {
                const double tv = ts.sample(ts.v[p], traces[t].times_s[i]);
                const double ta = ts.sample(ts.a[p], traces[t].times_s[i]);
                const double dv = traces[t].v_raw[i] - tv;
                const double da = traces[t].a_raw[i] - ta;
                d.push_back(std::sqrt(dv * dv + 0.1 * da * da));
            }
            std::sort(d.begin(), d.end());
            cost[t][p] = d.empty() ? 1e300 : d[d.size() / 2];
        }
    }
    // exhaustive assignment; target counts are tiny
    std::vector<int> perm(np);
    for (std::size_t i = 0; i < np; ++i) perm[i] = static_cast<int>(i);
    std::vector<int> best;
    double best_cost = 1e300;
    do {
        double c = 0.0;
        for (std::size_t t = 0; t < std::min(nt, np); ++t) c += cost[t][static_cast<std::size_t>(perm[t])];
        if (c < best_cost) {
            best_cost = c;
            best.assign(perm.begin(), perm.end());
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<int> out(nt, -1);
    for (std::size_t t = 0; t < std::min(nt, np); ++t) out[t] = ts.paths[static_cast<std::size_t>(best[t])];
    return out;
}

// Path whose ground-truth kinematics the trace tracks most closely over
// [t0, t1] (median pointwise distance). Robust to identity swaps elsewhere
// in the trace.
inline int attribute_span(const AccelTrace& tr, const TruthSeries& ts, double t0, double t1) {
    int best_path = -1;
    double best = 1e300;
    for (std::size_t p = 0; p < ts.paths.size(); ++p) {
        rvec d;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            if (tr.times_s[i] < t0 || tr.times_s[i] > t1) continue;
            const double dv = tr.v_raw[i] - ts.sample(ts.v[p], tr.times_s[i]);
            const double da = tr.a_raw[i] - ts.sample(ts.a[p], tr.times_s[i]);
            d.push_back(std::sqrt(dv * dv + 0.1 * da * da));
        }
        if (d.empty()) continue;
        std::sort(d.begin(), d.end());
        const double med = d[d.size() / 2];
        if (med < best) {
            best = med;
            best_path = ts.paths[p];
        }
    }
    return best_path;
}

// Per-segment labeling: each feature vector is attributed to the path its
// samples track over the segment span, then marked +1 when that path has an
// overlapping fall interval.
inline void label_features_by_segment(std::vector<FeatureVector>& features,
                                      const std::vector<ScenarioEvent>& events,
                                      const std::vector<AccelTrace>& traces, const TruthSeries& ts) {
    for (FeatureVector& f : features) {
        const AccelTrace* tr = nullptr;
        for (const AccelTrace& t : traces)
            if (t.target_id == f.target_id) tr = &t;
        const int path = tr ? attribute_span(*tr, ts, f.t_begin_s, f.t_end_s) : -1;
        f.label = -1;
        for (const ScenarioEvent& e : events) {
            if (e.path == path && e.label == "fall" && overlaps(f.t_begin_s, f.t_end_s, e.start_s, e.end_s)) {
                f.label = +1;
                break;
            }
        }
    }
}

// v(t0) + integral of a_smooth, integrated trapezoidally.
inline double integrate_distance(const AccelTrace& tr) {
    if (tr.size() < 2) return 0.0;
    const double dt = tr.times_s[1] - tr.times_s[0];
    rvec v(tr.size());
    v[0] = tr.v_raw[0];
    for (std::size_t i = 1; i < tr.size(); ++i)
        v[i] = v[i - 1] + 0.5 * (tr.a_smooth[i - 1] + tr.a_smooth[i]) * dt;
    double dist = 0.0;
    for (std::size_t i = 1; i < tr.size(); ++i) dist += 0.5 * (v[i - 1] + v[i]) * dt;
    return dist;
}

}  // namespace dpace
