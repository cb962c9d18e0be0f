#pragma once

// Piecewise-constant-acceleration motion of a dynamic path length.

#include <cmath>

#include "dpace/common.hpp"

namespace dpace {

// Path length change after dt under constant acceleration.
inline double dplc(double v_mps, double a_mps2, double dt_s) {
    return v_mps * dt_s + 0.5 * a_mps2 * dt_s * dt_s;
}

struct KinPiece {
    double duration_s = 0.0;
    double v0_mps = 0.0;
    double a_mps2 = 0.0;
};

struct KinState {
    double l_m = 0.0;  // cumulative path length change
    double v_mps = 0.0;
    double a_mps2 = 0.0;
};

class KinematicProfile {
public:
    KinematicProfile() = default;
    explicit KinematicProfile(std::vector<KinPiece> pieces) : pieces_(std::move(pieces)) {
        double t = 0.0, l = 0.0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const KinPiece& p = pieces_[i];
            if (p.duration_s <= 0.0) throw DataError("kinematics: piece durations must be > 0");
            double v_end = p.v0_mps + p.a_mps2 * p.duration_s;
            if (i + 1 < pieces_.size()) {
                double mismatch = std::abs(v_end - pieces_[i + 1].v0_mps);
                double scale = std::max({std::abs(v_end), std::abs(pieces_[i + 1].v0_mps), 1.0});
                if (mismatch > 1e-9 * scale)
                    throw DataError("kinematics: velocity discontinuity between pieces");
            }
            start_t_.push_back(t);
            start_l_.push_back(l);
            t += p.duration_s;
            l += dplc(p.v0_mps, p.a_mps2, p.duration_s);
        }
        total_t_ = t;
        total_l_ = l;
    }

    const std::vector<KinPiece>& pieces() const { return pieces_; }
    double duration_s() const { return total_t_; }
    bool empty() const { return pieces_.empty(); }

    KinState at(double t_s) const {
        if (pieces_.empty()) throw DataError("kinematics: empty profile");
        if (t_s < 0.0 || t_s > total_t_ * (1.0 + 1e-12) + 1e-12)
            throw DataError("kinematics: time outside profile");
        // pieces are few; linear scan is fine
        std::size_t i = pieces_.size() - 1;
        for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
            if (t_s < start_t_[k + 1]) { i = k; break; }
        }
        const KinPiece& p = pieces_[i];
        double z = t_s - start_t_[i];
        return {start_l_[i] + dplc(p.v0_mps, p.a_mps2, z), p.v0_mps + p.a_mps2 * z, p.a_mps2};
    }

private:
    std::vector<KinPiece> pieces_;
    std::vector<double> start_t_;
    std::vector<double> start_l_;
    double total_t_ = 0.0;
    double total_l_ = 0.0;
};

}  // namespace dpace
