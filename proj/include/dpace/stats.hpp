#pragma once

// Per-segment statistics feeding the relative features.

#include <algorithm>
#include <cmath>

#include "dpace/common.hpp"

namespace dpace {

// Mean after discarding the lowest and highest 5% of samples.
inline double truncated_mean(std::span<const double> x) {
    if (x.size() < 3) throw DataError("truncated_mean: input too short (>= 3 samples)");
    rvec s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const std::size_t drop = static_cast<std::size_t>(0.05 * static_cast<double>(s.size()));
    double sum = 0.0;
    for (std::size_t i = drop; i < s.size() - drop; ++i) sum += s[i];
    return sum / static_cast<double>(s.size() - 2 * drop);
}

// Linear-interpolated empirical quantile, p in [0, 1].
inline double quantile(std::span<const double> x, double p) {
    if (x.empty()) throw DataError("quantile: empty input");
    rvec s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const double h = p * static_cast<double>(s.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

inline double median(std::span<const double> x) { return quantile(x, 0.5); }

inline double iqr(std::span<const double> x) {
    if (x.size() < 4) throw DataError("iqr: input too short (>= 4 samples)");
    return quantile(x, 0.75) - quantile(x, 0.25);
}

// Mode of real-valued data via a 32-bin histogram over the sample range;
// reports the center of the fullest bin, ties toward the lower bin.
inline double histogram_mode(std::span<const double> x, int bins = 32) {
    if (x.empty()) throw DataError("histogram_mode: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mn == mx) return mn;
    std::vector<int> count(static_cast<std::size_t>(bins), 0);
    const double width = (mx - mn) / bins;
    for (double v : x) {
        int b = static_cast<int>((v - mn) / width);
        b = std::clamp(b, 0, bins - 1);
        ++count[static_cast<std::size_t>(b)];
    }
    const int best = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
    return mn + (best + 0.5) * width;
}

inline double sample_mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Sample standard deviation, n-1 denominator.
inline double sample_std(std::span<const double> x) {
    if (x.size() < 2) throw DataError("sample_std: input too short");
    const double m = sample_mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

inline double extreme_deviation(std::span<const double> x) {
    if (x.empty()) throw DataError("extreme_deviation: empty input");
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    return *mx - *mn;
}

// Skewness: (sum (x-m)^3 / n) / (sum (x-m)^2 / (n-1))^(3/2).
// Mixed n and n-1 denominators are intentional.
inline double skewness(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw DataError("skewness: input too short (>= 3 samples)");
    const double m = sample_mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    if (m2 == 0.0) throw DataError("degenerate segment");
    const double var = m2 / static_cast<double>(n - 1);
    return (m3 / static_cast<double>(n)) / std::pow(var, 1.5);
}

// Kurtosis: (sum (x-m)^4 / n) / (sum (x-m)^2 / (n-1))^2, no excess offset.
inline double kurtosis(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw DataError("kurtosis: input too short (>= 3 samples)");
    const double m = sample_mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    if (m2 == 0.0) throw DataError("degenerate segment");
    const double var = m2 / static_cast<double>(n - 1);
    return (m4 / static_cast<double>(n)) / (var * var);
}

}  // namespace dpace
