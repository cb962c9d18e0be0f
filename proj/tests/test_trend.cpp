#include <catch2/catch_amalgamated.hpp>

#include "dpace/rng.hpp"
#include "dpace/trendfilter.hpp"

using namespace dpace;

namespace {

double objective(const rvec& x, const rvec& y, double xi) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += (x[i] - y[i]) * (x[i] - y[i]);
    for (std::size_t i = 0; i + 2 < x.size(); ++i)
        v += xi * std::abs(x[i] - 2.0 * x[i + 1] + x[i + 2]);
    return v;
}

rvec noisy_line(std::size_t n, std::uint64_t seed, double slope = 0.3, double noise = 0.4) {
    Rng rng(seed);
    rvec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + slope * static_cast<double>(i) + noise * rng.normal();
    return y;
}

// closed-form least-squares affine fit
rvec affine_fit(const rvec& y) {
    const double n = static_cast<double>(y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sx += static_cast<double>(i);
        sy += y[i];
        sxx += static_cast<double>(i) * i;
        sxy += static_cast<double>(i) * y[i];
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double a = (sy - b * sx) / n;
    rvec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = a + b * static_cast<double>(i);
    return out;
}

}  // namespace

TEST_CASE("xi = 0 returns the input unchanged") {
    const rvec y = noisy_line(50, 3);
    const rvec x = l1_trend(y, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(x[i] == y[i]);
}

TEST_CASE("xi < 0 and short inputs are rejected") {
    CHECK_THROWS_AS(l1_trend({1.0, 2.0, 3.0}, -1.0), DataError);
    CHECK_THROWS_AS(l1_trend({1.0, 2.0}, 1.0), DataError);
}

TEST_CASE("constant input is a fixed point for any xi") {
    const rvec y(40, 2.5);
    for (double xi : {0.1, 10.0, 1e5}) {
        const rvec x = l1_trend(y, xi);
        for (double v : x) CHECK(v == Catch::Approx(2.5).margin(1e-9));
    }
}

TEST_CASE("huge xi reaches the affine limit") {
    const rvec y = noisy_line(80, 17);
    const double scale = energy(std::span<const double>(y));
    const rvec x = l1_trend(y, 1e6 * scale, 1e-16);
    for (std::size_t i = 0; i + 2 < x.size(); ++i) {
        CHECK(std::abs(x[i] - 2.0 * x[i + 1] + x[i + 2]) <= 1e-6);
    }
    const rvec fit = affine_fit(y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == Catch::Approx(fit[i]).margin(1e-6));
}

TEST_CASE("objective never exceeds the input's objective") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const rvec y = noisy_line(30 + seed * 3, 100 + seed, 0.1 * (seed % 5), 0.5);
        for (double xi : {0.01, 1.0, 50.0}) {
            const rvec x = l1_trend(y, xi);
            CHECK(objective(x, y, xi) <= objective(y, y, xi) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("returned point satisfies the subgradient conditions") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const rvec y = noisy_line(60, 42 + seed);
        const double xi = 2.0;
        const L1TrendResult res = l1_trend_full(y, xi, 1e-12);
        // stationarity: 2(x - y) + xi * D^T nu = 0 holds by construction;
        // check box feasibility and complementary slackness instead
        REQUIRE(res.dual.size() == y.size() - 2);
        for (std::size_t i = 0; i < res.dual.size(); ++i) {
            CHECK(std::abs(res.dual[i]) <= 1.0 + 1e-12);
            const double d2 = res.x[i] - 2.0 * res.x[i + 1] + res.x[i + 2];
            if (std::abs(d2) > 1e-6) {
                CHECK(res.dual[i] == Catch::Approx(d2 > 0 ? 1.0 : -1.0).margin(1e-6));
            }
        }
        CHECK(res.gap <= 1e-10 * std::max(1.0, energy(std::span<const double>(y))));
    }
}

TEST_CASE("duality gap certificate meets the default tolerance") {
    const rvec y = noisy_line(120, 7);
    const L1TrendResult res = l1_trend_full(y, 3.0);
    CHECK(res.gap <= 1e-8 * energy(std::span<const double>(y)));
}
