#pragma once

// Phase-error sanitization and static-path nulling.
//
// Conjugate multiplication against the reference antenna cancels the common
// per-packet phase error exactly; zeroing the DC bin of a window removes the
// direct and static reflection content, which has no Doppler.

#include "dpace/synth.hpp"

namespace dpace {

struct SanitizedFrame {
    double timestamp_s = 0.0;
    int n_pairs = 0;         // n_antennas - 1
    int n_subcarriers = 0;
    cvec g;                  // row-major [pair][subcarrier], pair m-1 holds H_m * conj(H_0)

    cplx& at(int pair, int k) { return g[static_cast<std::size_t>(pair) * n_subcarriers + k]; }
    const cplx& at(int pair, int k) const { return g[static_cast<std::size_t>(pair) * n_subcarriers + k]; }
};

inline SanitizedFrame conjugate_sanitize(const CsiFrame& frame) {
    if (frame.n_antennas < 2) throw DataError("no reference channel");
    SanitizedFrame out;
    out.timestamp_s = frame.timestamp_s;
    out.n_pairs = frame.n_antennas - 1;
    out.n_subcarriers = frame.n_subcarriers;
    out.g.resize(static_cast<std::size_t>(out.n_pairs) * out.n_subcarriers);
    for (int m = 1; m < frame.n_antennas; ++m)
        for (int k = 0; k < frame.n_subcarriers; ++k)
            out.at(m - 1, k) = frame.at(m, k) * std::conj(frame.at(0, k));
    return out;
}

struct SanitizedStream {
    RadioConfig radio;
    std::vector<SanitizedFrame> frames;

    std::size_t size() const { return frames.size(); }
};

inline SanitizedStream sanitize_stream(const CsiStream& stream) {
    SanitizedStream out;
    out.radio = stream.radio;
    out.frames.reserve(stream.frames.size());
    for (const CsiFrame& f : stream.frames) out.frames.push_back(conjugate_sanitize(f));
    return out;
}

struct SanitizedWindow {
    int pair = 0;            // surveillance antenna index - 1
    int subcarrier = 0;
    std::size_t start = 0;   // first packet index
    double dt_s = 0.0;
    double f_hz = 0.0;       // subcarrier frequency, used by the estimator
    cvec samples;

    std::size_t length() const { return samples.size(); }
};

inline SanitizedWindow window(const SanitizedStream& stream, int pair, int subcarrier,
                              std::size_t start, std::size_t w) {
    if (w == 0) throw DataError("window: empty window");
    if (start + w > stream.size()) throw DataError("window exceeds stream");
    if (stream.frames.empty() || pair < 0 || pair >= stream.frames.front().n_pairs ||
        subcarrier < 0 || subcarrier >= stream.frames.front().n_subcarriers)
        throw DataError("window: antenna/subcarrier out of range");
    SanitizedWindow out;
    out.pair = pair;
    out.subcarrier = subcarrier;
    out.start = start;
    out.dt_s = stream.radio.dt_s();
    out.f_hz = stream.radio.subcarrier_hz(subcarrier);
    out.samples.resize(w);
    for (std::size_t i = 0; i < w; ++i) out.samples[i] = stream.frames[start + i].at(pair, subcarrier);
    return out;
}

// Removes DFT bin 0 (and optionally a guard band of +/-guard_bins around it).
// Bin 0 alone is plain mean subtraction; the guard band uses direct bin
// projections, so no FFT length constraint applies.
inline cvec null_zero_frequency(const cvec& x, int guard_bins = 0) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if (guard_bins < 0) throw DataError("null_zero_frequency: guard_bins must be >= 0");
    cvec out = x;
    cplx mean(0.0, 0.0);
    for (const cplx& v : x) mean += v;
    mean /= static_cast<double>(n);
    for (cplx& v : out) v -= mean;
    for (int b = 1; b <= guard_bins; ++b) {
        for (int sgn : {+1, -1}) {
            const double w0 = kTwoPi * sgn * b / static_cast<double>(n);
            cplx bin(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                bin += out[i] * cplx(std::cos(w0 * i), -std::sin(w0 * i));
            bin /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i)
                out[i] -= bin * cplx(std::cos(w0 * i), std::sin(w0 * i));
            if (2 * b == static_cast<int>(n)) break;  // +/- coincide at Nyquist
        }
    }
    return out;
}

inline SanitizedWindow null_zero_frequency(const SanitizedWindow& w, int guard_bins = 0) {
    SanitizedWindow out = w;
    out.samples = null_zero_frequency(w.samples, guard_bins);
    return out;
}

}  // namespace dpace
