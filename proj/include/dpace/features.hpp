#pragma once

// Relative statistical features between adjacent trace segments. Each
// interior segment is described by how its central tendency and dispersion
// compare to both neighbors, plus its own shape moments.

#include <array>

#include "dpace/ampd.hpp"
#include "dpace/stats.hpp"

namespace dpace {

inline constexpr int kFeatureCount = 8;
inline constexpr int kFlagCount = 6;

struct FeatureVector {
    // rTM, rMedian, rMode, rExtremeDev, rStd, rIQR, Sk, Kt
    std::array<double, kFeatureCount> values{};
    // one degenerate-denominator flag per relative feature, same order
    std::array<double, kFlagCount> flags{};
    int segment_index = -1;
    int target_id = 0;
    double t_begin_s = 0.0;
    double t_end_s = 0.0;
    int label = 0;  // +1 fall, -1 no-fall, 0 unknown

    std::vector<double> as_input() const {
        std::vector<double> v(values.begin(), values.end());
        v.insert(v.end(), flags.begin(), flags.end());
        return v;
    }
};

struct RelativeStat {
    double value = 0.0;
    bool degenerate = false;
};

// (cur/prev + cur/next) / 2; a zero neighbor yields 0 with the degenerate flag.
inline RelativeStat relative_feature(double prev, double cur, double next) {
    if (prev == 0.0 || next == 0.0) return {0.0, true};
    return {(cur / prev + cur / next) / 2.0, false};
}

inline RelativeStat relative_iqr(std::span<const double> prev, std::span<const double> cur,
                                 std::span<const double> next) {
    return relative_feature(iqr(prev), iqr(cur), iqr(next));
}

namespace featdetail {

struct SegmentStats {
    double tmean, med, mode, extdev, sdev, quart;
    bool has_iqr;
};

inline SegmentStats stats_of(std::span<const double> seg) {
    SegmentStats s{};
    s.tmean = truncated_mean(seg);
    s.med = median(seg);
    s.mode = histogram_mode(seg);
    s.extdev = extreme_deviation(seg);
    s.sdev = sample_std(seg);
    s.has_iqr = seg.size() >= 4;
    s.quart = s.has_iqr ? iqr(seg) : 0.0;
    return s;
}

}  // namespace featdetail

// One vector per interior segment (both neighbors required); fewer than
// three segments produce nothing. Sk/Kt come from the segment's own samples.
inline std::vector<FeatureVector> extract_features(const rvec& trace,
                                                   const std::vector<Segment>& segments) {
    std::vector<FeatureVector> out;
    if (segments.size() < 3) return out;
    std::vector<featdetail::SegmentStats> st;
    st.reserve(segments.size());
    for (const Segment& s : segments) {
        if (s.end > trace.size() || s.start >= s.end) throw DataError("extract_features: bad segment");
        if (s.length() < 3) throw DataError("extract_features: segment too short (>= 3 samples)");
        st.push_back(featdetail::stats_of(std::span<const double>(trace.data() + s.start, s.length())));
    }
    for (std::size_t w = 1; w + 1 < segments.size(); ++w) {
        FeatureVector fv;
        fv.segment_index = static_cast<int>(w);
        const auto rel = [&](auto get, int slot) {
            RelativeStat r = relative_feature(get(st[w - 1]), get(st[w]), get(st[w + 1]));
            fv.values[static_cast<std::size_t>(slot)] = r.value;
            fv.flags[static_cast<std::size_t>(slot)] = r.degenerate ? 1.0 : 0.0;
        };
        rel([](const auto& s) { return s.tmean; }, 0);
        rel([](const auto& s) { return s.med; }, 1);
        rel([](const auto& s) { return s.mode; }, 2);
        rel([](const auto& s) { return s.extdev; }, 3);
        rel([](const auto& s) { return s.sdev; }, 4);
        if (st[w - 1].has_iqr && st[w].has_iqr && st[w + 1].has_iqr) {
            RelativeStat r = relative_feature(st[w - 1].quart, st[w].quart, st[w + 1].quart);
            fv.values[5] = r.value;
            fv.flags[5] = r.degenerate ? 1.0 : 0.0;
        } else {
            fv.values[5] = 0.0;
            fv.flags[5] = 1.0;
        }
        std::span<const double> seg(trace.data() + segments[w].start, segments[w].length());
        double m2 = 0.0;
        const double mean = sample_mean(seg);
        for (double v : seg) m2 += (v - mean) * (v - mean);
        if (m2 > 0.0) {
            fv.values[6] = skewness(seg);
            fv.values[7] = kurtosis(seg);
        }
        out.push_back(fv);
    }
    return out;
}

}  // namespace dpace
