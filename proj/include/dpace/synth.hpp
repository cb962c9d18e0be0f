#pragma once

// CSI stream synthesis from a channel scenario. Every run is fully
// determined by (scenario, seed); the emitted ground truth carries the
// per-packet path kinematics used downstream as the test oracle.

#include "dpace/rng.hpp"
#include "dpace/scenario.hpp"

namespace dpace {

struct CsiFrame {
    double timestamp_s = 0.0;
    int n_antennas = 0;
    int n_subcarriers = 0;
    cvec h;  // row-major [antenna][subcarrier]

    cplx& at(int m, int k) { return h[static_cast<std::size_t>(m) * n_subcarriers + k]; }
    const cplx& at(int m, int k) const { return h[static_cast<std::size_t>(m) * n_subcarriers + k]; }
};

struct CsiStream {
    RadioConfig radio;
    std::vector<CsiFrame> frames;

    std::size_t size() const { return frames.size(); }
};

struct GroundTruthRow {
    std::size_t packet = 0;
    int path = 0;
    double dplc_m = 0.0;
    double v_mps = 0.0;
    double a_mps2 = 0.0;
};

struct GroundTruth {
    std::vector<GroundTruthRow> rows;
    std::vector<ScenarioEvent> events;

    // Kinematic state of `path` at packet index p (rows are packet-major).
    const GroundTruthRow* find(std::size_t packet, int path) const {
        for (const GroundTruthRow& r : rows)
            if (r.packet == packet && r.path == path) return &r;
        return nullptr;
    }
};

// Phase rotation produced by a path length change l (round trip).
inline cplx dynamic_phase(double f_hz, double l_m, double c_mps = 3e8) {
    if (f_hz <= 0.0) throw DataError("dynamic_phase: frequency must be > 0");
    double ang = -2.0 * kTwoPi * f_hz * l_m / c_mps;
    return cplx(std::cos(ang), std::sin(ang));
}

struct SynthResult {
    CsiStream stream;
    GroundTruth truth;
};

inline SynthResult synthesize(const ChannelScenario& sc) {
    sc.validate();
    const RadioConfig& radio = sc.radio;
    const double dt = radio.dt_s();
    const std::size_t n_packets = static_cast<std::size_t>(std::llround(sc.duration_s * radio.packet_rate_hz));
    if (n_packets == 0) throw DataError("scenario: duration shorter than one packet");

    Rng rng(sc.seed);

    SynthResult out;
    out.stream.radio = radio;
    out.stream.frames.reserve(n_packets);
    out.truth.events = sc.events;

    const int M = radio.n_antennas;
    const int K = radio.n_subcarriers;

    std::vector<double> f_k(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) f_k[static_cast<std::size_t>(k)] = radio.subcarrier_hz(k);

    for (std::size_t p = 0; p < n_packets; ++p) {
        const double t = static_cast<double>(p) * dt;

        // Phase-error state for this packet, shared by all antennas.
        const double pdd = (sc.impairments.pdd_s > 0.0) ? rng.uniform(0.0, sc.impairments.pdd_s) : 0.0;
        const double sfo = sc.impairments.sfo_s_per_s * t;
        const double cfo = (sc.impairments.cfo_cycles > 0.0) ? sc.impairments.cfo_cycles * rng.normal() : 0.0;

        CsiFrame frame;
        frame.timestamp_s = t;
        frame.n_antennas = M;
        frame.n_subcarriers = K;
        frame.h.assign(static_cast<std::size_t>(M) * K, cplx(0.0, 0.0));

        // Per-path ToF at time t; dynamic paths move with their profile.
        for (std::size_t pi = 0; pi < sc.paths.size(); ++pi) {
            const PathSpec& path = sc.paths[pi];
            double l = 0.0;
            if (path.kind == PathKind::dynamic) {
                KinState st = sc.profiles[static_cast<std::size_t>(path.profile)].at(t);
                l = st.l_m;
                out.truth.rows.push_back({p, static_cast<int>(pi), st.l_m, st.v_mps, st.a_mps2});
            }
            const double tof0 = path.tof_s + 2.0 * l / radio.c_mps;
            for (int m = 0; m < M; ++m) {
                const double gain = (m == 0) ? path.effective_ref_gain() : 1.0;
                if (gain == 0.0) continue;
                const double tof = tof0 + (m > 0 ? m * path.antenna_tof_step_s : 0.0);
                const cplx amp = path.amplitude * gain;
                for (int k = 0; k < K; ++k) {
                    const double ang = -kTwoPi * f_k[static_cast<std::size_t>(k)] * tof;
                    frame.at(m, k) += amp * cplx(std::cos(ang), std::sin(ang));
                }
            }
        }

        // eps = f_k*(pdd + sfo) + cfo, applied as exp(-j*2*pi*eps) on every antenna.
        if (pdd != 0.0 || sfo != 0.0 || cfo != 0.0) {
            for (int k = 0; k < K; ++k) {
                const double eps = f_k[static_cast<std::size_t>(k)] * (pdd + sfo) + cfo;
                const double ang = -kTwoPi * eps;
                const cplx rot(std::cos(ang), std::sin(ang));
                for (int m = 0; m < M; ++m) frame.at(m, k) *= rot;
            }
        }

        if (sc.impairments.noise_power > 0.0) {
            for (int m = 0; m < M; ++m)
                for (int k = 0; k < K; ++k) frame.at(m, k) += rng.cnormal(sc.impairments.noise_power);
        }

        out.stream.frames.push_back(std::move(frame));
    }
    return out;
}

}  // namespace dpace
