#pragma once

// Automatic multiscale peak detection on a smoothed trace, deterministic 0/1
// scalogram variant. b[q][u] = 0 when u is a local maximum at scale q; the
// scale with the most maxima is retained (gamma_min = argmin of the row
// sums) and a sample is a peak when its column is zero at every scale up to
// gamma_min.
//
// Boundary policy: the row sums count an out-of-range comparison as a
// non-maximum so that scale selection reflects interior structure only; the
// final column test treats it as vacuously satisfied so that maxima near the
// ends survive large scales. Endpoints are never peaks.

#include <algorithm>

#include "dpace/common.hpp"

namespace dpace {

inline std::vector<std::size_t> ampd(const rvec& x) {
    const std::size_t n = x.size();
    if (n < 4) throw DataError("ampd: input too short (>= 4 samples)");
    const std::size_t q_max = (n + 1) / 2 - 1;  // ceil(n/2) - 1 scales

    auto is_max = [&](std::size_t u, std::size_t q, bool strict_bounds) {
        if (u == 0 || u + 1 >= n) return false;  // interior candidates only
        if (u < q) {
            if (strict_bounds) return false;
        } else if (!(x[u] > x[u - q])) {
            return false;
        }
        if (u + q >= n) {
            if (strict_bounds) return false;
        } else if (!(x[u] > x[u + q])) {
            return false;
        }
        return true;
    };

    // eta[q] counts non-maxima at scale q; tracked without materializing the
    // scalogram.
    std::size_t best_q = 1;
    std::size_t best_ones = n + 1;
    for (std::size_t q = 1; q <= q_max; ++q) {
        std::size_t ones = 0;
        for (std::size_t u = 0; u < n; ++u)
            if (!is_max(u, q, true)) ++ones;
        if (ones < best_ones) {
            best_ones = ones;
            best_q = q;  // ties keep the smallest scale
        }
    }

    std::vector<std::size_t> peaks;
    for (std::size_t u = 1; u + 1 < n; ++u) {
        bool peak = true;
        for (std::size_t q = 1; q <= best_q; ++q) {
            if (!is_max(u, q, false)) { peak = false; break; }
        }
        if (peak) peaks.push_back(u);
    }
    return peaks;
}

struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;  // exclusive

    std::size_t length() const { return end - start; }
};

// Consecutive detected peaks delimit segments; spans before the first and
// after the last peak are discarded.
inline std::vector<Segment> segment(std::size_t trace_length, const std::vector<std::size_t>& peaks) {
    for (std::size_t p : peaks)
        if (p >= trace_length) throw DataError("segment: peak index outside trace");
    if (!std::is_sorted(peaks.begin(), peaks.end())) throw DataError("segment: peaks must be sorted");
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) out.push_back({peaks[i], peaks[i + 1]});
    return out;
}

}  // namespace dpace
