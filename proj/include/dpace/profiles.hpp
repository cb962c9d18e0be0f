#pragma once

// Scenario builders for synthetic experiments: standard three-path channels
// and kinematic profiles for gait-like walking, falls, and sit/stand-like
// low-excursion events.

#include <algorithm>
#include <cmath>

#include "dpace/scenario.hpp"

namespace dpace {

// Alternating-acceleration gait approximation. Velocity swings around
// v_mean by a_amp*half_period/2; the mean velocity (and so the covered
// distance v_mean * duration) is exact when the piece count is even.
inline KinematicProfile make_gait_profile(double v_mean, double a_amp, double half_period_s,
                                          double duration_s) {
    std::vector<KinPiece> pieces;
    const double dv = a_amp * half_period_s / 2.0;
    double v = v_mean - dv;
    double sign = 1.0;
    double t = 0.0;
    while (t < duration_s + half_period_s) {
        pieces.push_back({half_period_s, v, sign * a_amp});
        v += sign * a_amp * half_period_s;
        sign = -sign;
        t += half_period_s;
    }
    return KinematicProfile(pieces);
}

inline KinematicProfile make_constant_profile(double v0, double a, double duration_s) {
    return KinematicProfile({{duration_s, v0, a}});
}

struct FallTimes {
    double start_s = 0.0;
    double end_s = 0.0;
};

namespace profiledetail {

// Appends alternating-acceleration pieces starting at velocity v until at
// least `span` seconds are added. Returns the end velocity.
inline double append_sway(std::vector<KinPiece>& pieces, double v, double sign, double a_amp,
                          double half_period_s, double span) {
    double t = 0.0;
    while (t < span) {
        pieces.push_back({half_period_s, v, sign * a_amp});
        v += sign * a_amp * half_period_s;
        sign = -sign;
        t += half_period_s;
    }
    return v;
}

}  // namespace profiledetail

// Gait walking, then a 0.4 s high-|a| excursion, then quiescence: a slow
// drift with a gentle residual sway. Returns the profile and the excursion
// interval.
inline std::pair<KinematicProfile, FallTimes> make_fall_profile(double v_mean, double a_amp,
                                                                double half_period_s, double walk_s,
                                                                double total_s, double fall_peak_a) {
    std::vector<KinPiece> pieces;
    const double dv = a_amp * half_period_s / 2.0;
    double v = v_mean - dv;
    double sign = 1.0;
    double t = 0.0;
    while (t + half_period_s <= walk_s + 1e-9) {
        pieces.push_back({half_period_s, v, sign * a_amp});
        v += sign * a_amp * half_period_s;
        sign = -sign;
        t += half_period_s;
    }
    // surge then brake to a near stop over 0.4 s
    const double v_res = 0.08;
    const double surge_v = v + fall_peak_a * 0.2;
    pieces.push_back({0.2, v, fall_peak_a});
    pieces.push_back({0.2, surge_v, (v_res - surge_v) / 0.2});
    const FallTimes times{t, t + 0.4};
    t += 0.4;
    profiledetail::append_sway(pieces, v_res, +1.0, 0.35, 0.6, total_s - t + 2.0);
    return {KinematicProfile(pieces), times};
}

// Low-excursion negative: brief mild deceleration to a slow drift, a short
// pause, then re-acceleration and more walking.
inline KinematicProfile make_sit_stand_profile(double v_mean, double a_amp, double half_period_s,
                                               double walk_s, double total_s, double event_a) {
    std::vector<KinPiece> pieces;
    const double dv = a_amp * half_period_s / 2.0;
    double v = v_mean - dv;
    double sign = 1.0;
    double t = 0.0;
    while (t + half_period_s <= walk_s + 1e-9) {
        pieces.push_back({half_period_s, v, sign * a_amp});
        v += sign * a_amp * half_period_s;
        sign = -sign;
        t += half_period_s;
    }
    const double v_slow = 0.15;
    const double brake = std::min(event_a, (v - v_slow) / 0.4);
    const double t_brake = (v - v_slow) / brake;
    pieces.push_back({t_brake, v, -brake});
    t += t_brake;
    const double pause = 0.8;
    pieces.push_back({pause, v_slow, 0.0});
    t += pause;
    const double t_up = (v - v_slow) / event_a;
    pieces.push_back({t_up, v_slow, event_a});
    t += t_up;
    profiledetail::append_sway(pieces, v, sign, a_amp, half_period_s, total_s - t + 2.0);
    return KinematicProfile(pieces);
}

// Direct + static reflection + one dynamic path with the default 1 : 0.3 : 0.1
// amplitude ladder. SNR is the per-sample dynamic-path power over the noise
// power on one (antenna, subcarrier) cell.
inline ChannelScenario make_single_target_scenario(const KinematicProfile& profile, double duration_s,
                                                   std::uint64_t seed, double snr_db,
                                                   const RadioConfig& radio = {}) {
    ChannelScenario sc;
    sc.radio = radio;
    sc.duration_s = duration_s;
    sc.seed = seed;
    sc.profiles.push_back(profile);
    PathSpec direct;
    direct.kind = PathKind::direct;
    direct.amplitude = {1.0, 0.0};
    direct.tof_s = 2e-9;
    PathSpec wall;
    wall.kind = PathKind::static_reflection;
    wall.amplitude = {0.3, 0.0};
    wall.tof_s = 2.5e-8;
    PathSpec mover;
    mover.kind = PathKind::dynamic;
    mover.amplitude = {0.1, 0.0};
    mover.tof_s = 4e-8;
    mover.profile = 0;
    sc.paths = {direct, wall, mover};
    if (snr_db < 1e9) sc.impairments.noise_power = std::norm(mover.amplitude) / std::pow(10.0, snr_db / 10.0);
    return sc;
}

inline ChannelScenario make_two_target_scenario(const KinematicProfile& p0, const KinematicProfile& p1,
                                                double amp0, double amp1, double duration_s,
                                                std::uint64_t seed, double snr_db,
                                                const RadioConfig& radio = {}) {
    ChannelScenario sc;
    sc.radio = radio;
    sc.duration_s = duration_s;
    sc.seed = seed;
    sc.profiles = {p0, p1};
    PathSpec direct;
    direct.kind = PathKind::direct;
    direct.amplitude = {1.0, 0.0};
    direct.tof_s = 2e-9;
    PathSpec wall;
    wall.kind = PathKind::static_reflection;
    wall.amplitude = {0.3, 0.0};
    wall.tof_s = 2.5e-8;
    PathSpec m0;
    m0.kind = PathKind::dynamic;
    m0.amplitude = {amp0, 0.0};
    m0.tof_s = 4e-8;
    m0.profile = 0;
    PathSpec m1;
    m1.kind = PathKind::dynamic;
    m1.amplitude = {amp1, 0.0};
    m1.tof_s = 5.5e-8;
    m1.profile = 1;
    sc.paths = {direct, wall, m0, m1};
    if (snr_db < 1e9) sc.impairments.noise_power = amp0 * amp0 / std::pow(10.0, snr_db / 10.0);
    return sc;
}

inline constexpr double kNoiselessSnr = 1e18;  // sentinel: no noise term

}  // namespace dpace
