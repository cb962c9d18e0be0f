#pragma once

// l1 trend filter: minimize  sum (x_u - y_u)^2 + xi * sum |x_{u-1} - 2 x_u + x_{u+1}|.
//
// Solved on the box-constrained dual of the second-difference formulation
// (dimension U-2) with a log-barrier Newton method; the pentadiagonal Newton
// systems use a banded LDL^T factorization. Convergence is certified by the
// primal-dual gap.

#include <cmath>
#include <limits>

#include "dpace/common.hpp"

namespace dpace {
namespace trenddetail {

// Symmetric banded solve, bandwidth 2 (pentadiagonal), in-place LDL^T.
// bands[0] = diagonal, bands[1] = first off-diagonal, bands[2] = second.
inline rvec solve_penta(rvec d0, rvec d1, rvec d2, rvec rhs) {
    const std::size_t n = d0.size();
    for (std::size_t i = 0; i < n; ++i) {
        double di = d0[i];
        if (i >= 1) di -= d1[i - 1] * d1[i - 1] * d0[i - 1];
        if (i >= 2) di -= d2[i - 2] * d2[i - 2] * d0[i - 2];
        if (di <= 0.0) throw NumericalError("l1_trend: Newton system not positive definite");
        d0[i] = di;
        if (i + 1 < n) {
            double e = d1[i];
            if (i >= 1) e -= d1[i - 1] * d2[i - 1] * d0[i - 1];
            d1[i] = e / di;
        }
        if (i + 2 < n) d2[i] = d2[i] / di;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 1) rhs[i] -= d1[i - 1] * rhs[i - 1];
        if (i >= 2) rhs[i] -= d2[i - 2] * rhs[i - 2];
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= d0[i];
    for (std::size_t ii = n; ii-- > 0;) {
        if (ii + 1 < n) rhs[ii] -= d1[ii] * rhs[ii + 1];
        if (ii + 2 < n) rhs[ii] -= d2[ii] * rhs[ii + 2];
    }
    return rhs;
}

// Second difference Dx, length n-2.
inline rvec second_diff(const rvec& x) {
    rvec d(x.size() >= 2 ? x.size() - 2 : 0);
    for (std::size_t i = 0; i + 2 < x.size(); ++i) d[i] = x[i] - 2.0 * x[i + 1] + x[i + 2];
    return d;
}

inline rvec dt_times(const rvec& nu, std::size_t n) {
    rvec out(n, 0.0);
    for (std::size_t i = 0; i < nu.size(); ++i) {
        out[i] += nu[i];
        out[i + 1] -= 2.0 * nu[i];
        out[i + 2] += nu[i];
    }
    return out;
}

// M*nu with M = D D^T (pentadiagonal: 6, -4, 1).
inline rvec m_times(const rvec& nu) {
    const std::size_t m = nu.size();
    rvec out(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double v = 6.0 * nu[i];
        if (i >= 1) v -= 4.0 * nu[i - 1];
        if (i + 1 < m) v -= 4.0 * nu[i + 1];
        if (i >= 2) v += nu[i - 2];
        if (i + 2 < m) v += nu[i + 2];
        out[i] = v;
    }
    return out;
}

}  // namespace trenddetail

struct L1TrendResult {
    rvec x;
    rvec dual;        // optimal box multipliers, |dual_i| <= 1
    double gap = 0.0; // final primal-dual gap
    int newton_steps = 0;
};

inline L1TrendResult l1_trend_full(const rvec& y, double xi, double rel_gap_tol = 1e-8) {
    using namespace trenddetail;
    if (xi < 0.0) throw DataError("l1_trend: xi must be >= 0");
    if (y.size() < 3) throw DataError("l1_trend: input too short (>= 3 samples)");
    const std::size_t n = y.size();
    const std::size_t m = n - 2;
    L1TrendResult res;
    if (xi == 0.0) {
        res.x = y;
        res.dual.assign(m, 0.0);
        return res;
    }

    const rvec dy = second_diff(y);
    const double e_y = std::max(energy(std::span<const double>(y)), 1e-300);
    const double gap_tol = rel_gap_tol * e_y;

    auto primal = [&](const rvec& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += (x[i] - y[i]) * (x[i] - y[i]);
        const rvec dx = second_diff(x);
        for (double d : dx) v += xi * std::abs(d);
        return v;
    };
    auto dual_value = [&](const rvec& nu) {
        const rvec mnu = m_times(nu);
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            quad += nu[i] * mnu[i];
            lin += nu[i] * dy[i];
        }
        return -xi * xi / 4.0 * quad + xi * lin;
    };
    auto x_of = [&](const rvec& nu) {
        rvec dtnu = dt_times(nu, n);
        rvec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - xi / 2.0 * dtnu[i];
        return x;
    };

    rvec nu(m, 0.0);
    double t = 1.0 / std::max(xi, 1.0);
    const double mu = 20.0;
    const int max_outer = 60, max_inner = 50;

    for (int outer = 0; outer < max_outer; ++outer) {
        for (int inner = 0; inner < max_inner; ++inner) {
            const rvec mnu = m_times(nu);
            rvec grad(m), hd0(m), hd1(m > 1 ? m - 1 : 0, -4.0 * t * xi * xi / 2.0),
                hd2(m > 2 ? m - 2 : 0, 1.0 * t * xi * xi / 2.0);
            for (std::size_t i = 0; i < m; ++i) {
                const double box = 1.0 - nu[i] * nu[i];
                grad[i] = t * (xi * xi / 2.0 * mnu[i] - xi * dy[i]) + 2.0 * nu[i] / box;
                hd0[i] = t * xi * xi / 2.0 * 6.0 + (2.0 + 2.0 * nu[i] * nu[i]) / (box * box);
            }
            rvec rhs(m);
            for (std::size_t i = 0; i < m; ++i) rhs[i] = -grad[i];
            rvec step = solve_penta(hd0, hd1, hd2, rhs);
            ++res.newton_steps;
            double decrement = 0.0;
            for (std::size_t i = 0; i < m; ++i) decrement += -grad[i] * step[i];
            if (decrement / 2.0 < 1e-12) break;

            // backtracking line search staying strictly inside the box
            double alpha = 1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (step[i] > 0.0) alpha = std::min(alpha, 0.99 * (1.0 - nu[i]) / step[i]);
                else if (step[i] < 0.0) alpha = std::min(alpha, 0.99 * (-1.0 - nu[i]) / step[i]);
            }
            auto barrier_obj = [&](const rvec& v) {
                double b = -t * dual_value(v);
                for (std::size_t i = 0; i < m; ++i) {
                    const double box = 1.0 - v[i] * v[i];
                    if (box <= 0.0) return std::numeric_limits<double>::infinity();
                    b -= std::log(box);
                }
                return b;
            };
            const double f0 = barrier_obj(nu);
            rvec trial(m);
            int ls = 0;
            for (; ls < 60; ++ls) {
                for (std::size_t i = 0; i < m; ++i) trial[i] = nu[i] + alpha * step[i];
                if (barrier_obj(trial) <= f0 - 0.25 * alpha * decrement) break;
                alpha *= 0.5;
            }
            if (ls == 60) break;
            nu = trial;
        }
        res.x = x_of(nu);
        res.gap = primal(res.x) - dual_value(nu);
        if (res.gap <= gap_tol) break;
        t *= mu;
    }
    if (res.x.empty()) res.x = x_of(nu);
    res.dual = nu;
    return res;
}

inline rvec l1_trend(const rvec& y, double xi, double rel_gap_tol = 1e-8) {
    return l1_trend_full(y, xi, rel_gap_tol).x;
}

}  // namespace dpace
