#pragma once

// Fall detection on extracted segment features.

#include "dpace/features.hpp"
#include "dpace/svm.hpp"

namespace dpace {

struct DetectionRow {
    int segment_index = -1;
    int target_id = 0;
    double t_begin_s = 0.0;
    double t_end_s = 0.0;
    double decision = 0.0;
    bool fall = false;
};

struct DetectionReport {
    std::vector<DetectionRow> rows;
};

inline DetectionReport detect(const SvmModel& model, const std::vector<FeatureVector>& features) {
    DetectionReport report;
    report.rows.reserve(features.size());
    for (const FeatureVector& fv : features) {
        DetectionRow row;
        row.segment_index = fv.segment_index;
        row.target_id = fv.target_id;
        row.t_begin_s = fv.t_begin_s;
        row.t_end_s = fv.t_end_s;
        row.decision = model.decision(fv.as_input());
        row.fall = row.decision > 0.0;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace dpace
