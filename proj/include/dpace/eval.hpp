#pragma once

// Scenario-level evaluation: detection rates against labeled fall
// intervals, plus acceleration and distance error versus ground truth.

#include <cmath>

#include "dpace/pipeline.hpp"

namespace dpace {

struct EvalReport {
    double tpr = std::nan("");  // NaN marks not-applicable (no labeled falls)
    double fpr = 0.0;
    double accel_median_pct_err = 0.0;
    double distance_pct_err = 0.0;
    int true_positives = 0, false_negatives = 0, false_positives = 0, true_negatives = 0;

    bool tpr_applicable() const { return !std::isnan(tpr); }
};

// A detection is a true positive only when its segment overlaps a labeled
// fall interval of the path the segment's samples track.
inline EvalReport evaluate(const std::vector<AccelTrace>& traces, const DetectionReport& detections,
                           const GroundTruth& truth, double packet_dt_s,
                           double min_truth_accel = 0.05) {
    const TruthSeries ts = TruthSeries::build(truth, packet_dt_s);
    const std::vector<int> path_of_target = map_targets_to_paths(traces, ts);

    EvalReport rep;
    for (const DetectionRow& row : detections.rows) {
        const AccelTrace* tr = nullptr;
        for (const AccelTrace& t : traces)
            if (t.target_id == row.target_id) tr = &t;
        const int path = tr ? attribute_span(*tr, ts, row.t_begin_s, row.t_end_s) : -1;
        bool is_fall = false;
        for (const ScenarioEvent& e : truth.events) {
            if (e.label == "fall" && e.path == path && overlaps(row.t_begin_s, row.t_end_s, e.start_s, e.end_s)) {
                is_fall = true;
                break;
            }
        }
        if (is_fall && row.fall) ++rep.true_positives;
        else if (is_fall) ++rep.false_negatives;
        else if (row.fall) ++rep.false_positives;
        else ++rep.true_negatives;
    }
    const int pos = rep.true_positives + rep.false_negatives;
    const int neg = rep.false_positives + rep.true_negatives;
    if (pos > 0) rep.tpr = static_cast<double>(rep.true_positives) / pos;
    rep.fpr = neg > 0 ? static_cast<double>(rep.false_positives) / neg : 0.0;

    // acceleration error on samples where the true acceleration is resolvable
    rvec errs;
    double dist_err_sum = 0.0;
    int dist_count = 0;
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const int path = path_of_target[t];
        std::size_t pi = 0;
        for (; pi < ts.paths.size(); ++pi)
            if (ts.paths[pi] == path) break;
        if (pi == ts.paths.size()) continue;
        for (std::size_t i = 0; i < traces[t].size(); ++i) {
            const double ta = ts.sample(ts.a[pi], traces[t].times_s[i]);
            if (std::abs(ta) > min_truth_accel)
                errs.push_back(std::abs(traces[t].a_smooth[i] - ta) / std::abs(ta));
        }
        if (traces[t].size() >= 2) {
            const double d_hat = integrate_distance(traces[t]);
            const double l0 = ts.sample(ts.l[pi], traces[t].times_s.front());
            const double l1 = ts.sample(ts.l[pi], traces[t].times_s.back());
            const double d_true = l1 - l0;
            if (std::abs(d_true) > 1e-6) {
                dist_err_sum += std::abs(d_hat - d_true) / std::abs(d_true);
                ++dist_count;
            }
        }
    }
    if (!errs.empty()) {
        std::sort(errs.begin(), errs.end());
        rep.accel_median_pct_err = 100.0 * errs[errs.size() / 2];
    }
    if (dist_count > 0) rep.distance_pct_err = 100.0 * dist_err_sum / dist_count;
    return rep;
}

}  // namespace dpace
