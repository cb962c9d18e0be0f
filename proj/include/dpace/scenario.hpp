#pragma once

// Declarative channel description consumed by the synthesizer.

#include <optional>

#include "dpace/kinematics.hpp"
#include "dpace/radio.hpp"

namespace dpace {

enum class PathKind { direct, static_reflection, dynamic };

inline const char* to_string(PathKind k) {
    switch (k) {
        case PathKind::direct: return "direct";
        case PathKind::static_reflection: return "static_reflection";
        case PathKind::dynamic: return "dynamic";
    }
    return "?";
}

inline PathKind path_kind_from(const std::string& s) {
    if (s == "direct") return PathKind::direct;
    if (s == "static_reflection") return PathKind::static_reflection;
    if (s == "dynamic") return PathKind::dynamic;
    throw DataError("scenario: unknown path kind '" + s + "'");
}

struct PathSpec {
    PathKind kind = PathKind::direct;
    cplx amplitude{1.0, 0.0};          // attenuation on surveillance antennas
    double ref_gain = -1.0;            // multiplier on the reference antenna; <0 selects the kind default
    double tof_s = 0.0;
    double antenna_tof_step_s = 1e-10; // extra delay per surveillance antenna index
    int profile = -1;                  // index into ChannelScenario::profiles (dynamic only)

    // The reference antenna is directional toward the transmitter, so by
    // default only the direct path reaches it.
    double effective_ref_gain() const {
        if (ref_gain >= 0.0) return ref_gain;
        return kind == PathKind::direct ? 1.0 : 0.0;
    }
};

struct ImpairmentSpec {
    double pdd_s = 0.0;            // per-packet delay, uniform in [0, pdd_s]
    double sfo_s_per_s = 0.0;      // slow drift: eps_sfo(t) = sfo_s_per_s * t
    double cfo_cycles = 0.0;       // per-packet residual, N(0, cfo_cycles^2)
    double noise_power = 0.0;      // E|n|^2 of additive complex Gaussian noise

    bool all_zero() const {
        return pdd_s == 0.0 && sfo_s_per_s == 0.0 && cfo_cycles == 0.0 && noise_power == 0.0;
    }
    void validate() const {
        if (pdd_s < 0.0 || sfo_s_per_s < 0.0 || cfo_cycles < 0.0 || noise_power < 0.0)
            throw DataError("impairments: all fields must be >= 0");
    }
};

// Labeled time span on one path, e.g. a ground-truth fall interval.
struct ScenarioEvent {
    int path = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string label;
};

struct ChannelScenario {
    RadioConfig radio;
    std::vector<PathSpec> paths;
    std::vector<KinematicProfile> profiles;
    ImpairmentSpec impairments;
    std::vector<ScenarioEvent> events;
    double duration_s = 1.0;
    std::uint64_t seed = 0;

    void validate() const {
        radio.validate();
        impairments.validate();
        if (paths.empty()) throw DataError("empty channel");
        if (duration_s <= 0.0) throw DataError("scenario: duration_s must be > 0");
        for (const PathSpec& p : paths) {
            if (p.tof_s < 0.0) throw DataError("scenario: tof_s must be >= 0");
            if (p.kind == PathKind::dynamic) {
                if (p.profile < 0 || p.profile >= static_cast<int>(profiles.size()))
                    throw DataError("scenario: dynamic path without a kinematic profile");
                if (profiles[static_cast<std::size_t>(p.profile)].duration_s() + 1e-12 < duration_s)
                    throw DataError("scenario: kinematic profile shorter than scenario duration");
            } else if (p.profile >= 0) {
                throw DataError("scenario: only dynamic paths take a kinematic profile");
            }
        }
        for (const ScenarioEvent& e : events) {
            if (e.path < 0 || e.path >= static_cast<int>(paths.size()))
                throw DataError("scenario: event on unknown path");
            if (!(e.end_s > e.start_s)) throw DataError("scenario: event interval is empty");
        }
    }
};

}  // namespace dpace
