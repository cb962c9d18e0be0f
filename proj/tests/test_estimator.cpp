#include <catch2/catch_amalgamated.hpp>

#include "dpace/estimator.hpp"
#include "dpace/rng.hpp"

using namespace dpace;

namespace {

constexpr double kF = 5.805e9;
constexpr double kC = 3e8;
constexpr double kRate = 600.0;

SanitizedWindow make_window(std::size_t w, double v, double a, double f_hz = kF, double amp = 1.0) {
    SanitizedWindow win;
    win.dt_s = 1.0 / kRate;
    win.f_hz = f_hz;
    win.samples.resize(w);
    for (std::size_t n = 0; n < w; ++n) {
        const double t = static_cast<double>(n) * win.dt_s;
        const double l = v * t + 0.5 * a * t * t;
        win.samples[n] = amp * std::polar(1.0, -2.0 * kTwoPi * f_hz * l / kC);
    }
    return win;
}

SanitizedWindow add_noise(SanitizedWindow win, double power, std::uint64_t seed) {
    Rng rng(seed);
    for (cplx& v : win.samples) v += rng.cnormal(power);
    return win;
}

SanitizedWindow dc_null(SanitizedWindow win) {
    win.samples = null_zero_frequency(win.samples);
    return win;
}

double mid_velocity(std::size_t w, double v, double a) {
    return v + a * (static_cast<double>(w) - 1.0) / 2.0 / kRate;
}

}  // namespace

TEST_CASE("psia of zero input is zero") {
    SanitizedWindow win = make_window(120, 1.0, 0.0);
    for (cplx& v : win.samples) v = 0.0;
    const PsiaSurface surf = psia(win, {});
    for (const cplx& v : surf.values) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("psia of a pure tone is constant over time at the predicted phase") {
    const double v = 1.1;
    const SanitizedWindow win = make_window(120, v, 0.0);
    EstimatorConfig cfg;
    const PsiaSurface surf = psia(win, cfg);
    for (int j = 0; j < surf.n_tau; j += 7) {
        const double u = surf.u(j);
        const cplx want = std::polar(1.0, -4.0 * kPi * kF * v * u / kC);
        // interior samples only: skip the zero rim plus the kernel half-width
        const int lo = static_cast<int>(std::ceil(u / (2.0 * win.dt_s))) + 5;
        const int hi = surf.n_t - 1 - lo;
        for (int i = lo; i < hi; i += 11) {
            INFO("j=" << j << " i=" << i);
            CHECK(std::abs(surf.at(j, i) - want) < 2e-3);
        }
    }
}

TEST_CASE("psia of a quadratic-phase window has linear phase in time") {
    const double v = 0.8, a = 2.0;
    const SanitizedWindow win = make_window(120, v, a);
    const PsiaSurface surf = psia(win, {});
    const int j = 10;
    const double u = surf.u(j);
    const int lo = static_cast<int>(std::ceil(u / (2.0 * win.dt_s))) + 1;
    const int hi = surf.n_t - 1 - lo;
    // least-squares phase slope over the valid strip
    double prev = std::arg(surf.at(j, lo)), acc = prev;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = lo; i < hi; ++i) {
        const double ang = std::arg(surf.at(j, i));
        if (i > lo) {
            double d = ang - prev;
            while (d > kPi) d -= kTwoPi;
            while (d < -kPi) d += kTwoPi;
            acc += d;
        }
        prev = ang;
        const double t = static_cast<double>(i) * win.dt_s;
        sx += t; sy += acc; sxx += t * t; sxy += t * acc; ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double want = -4.0 * kPi * kF * a * u / kC;
    CHECK(slope == Catch::Approx(want).epsilon(1e-4));
}

TEST_CASE("psia rejects oversized lag counts") {
    EstimatorConfig cfg;
    cfg.lag_count = 100;
    CHECK_THROWS_WITH(psia(make_window(120, 1.0, 0.0), cfg), "insufficient window");
}

TEST_CASE("scale is the identity on a row with s*(tau+t_d) = 1") {
    SanitizedWindow win = make_window(64, 0.9, 1.3);
    EstimatorConfig cfg;
    cfg.t_d_s = 1.0;
    cfg.s = 1.0;
    cfg.lag_count = 1;
    const PsiaSurface surf = psia(win, cfg);
    const PsiaSurface scaled = scale(surf, cfg);
    for (int i = 0; i < surf.n_t; ++i) CHECK(std::abs(scaled.at(0, i) - surf.at(0, i)) < 1e-14);
    CHECK(scaled.t_step == Catch::Approx(surf.t_step * 1.0));
}

TEST_CASE("scale of the zero surface is zero") {
    SanitizedWindow win = make_window(48, 0.0, 0.0);
    for (cplx& v : win.samples) v = 0.0;
    EstimatorConfig cfg;
    const PsiaSurface scaled = scale(psia(win, cfg), cfg);
    for (const cplx& v : scaled.values) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("scale divides a linear phase slope by s*(tau+t_d)") {
    // hand-built single-row surface: tone with known slope in t
    PsiaSurface surf;
    surf.n_tau = 1;
    surf.n_t = 200;
    surf.t_step = 1.0 / kRate;
    surf.tau_step = 1.0 / kRate;
    surf.u0 = 0.12;
    surf.f_ref = kF;
    const double cps = 0.02;  // cycles per input sample
    surf.values.resize(200);
    for (int i = 0; i < 200; ++i) surf.values[static_cast<std::size_t>(i)] = std::polar(1.0, kTwoPi * cps * i);
    EstimatorConfig cfg;
    cfg.s = 1.7;
    const PsiaSurface out = scale(surf, cfg);
    // fit the output slope over samples that map inside the input support
    const double ratio = 1.0;  // single row: u == u_max, resampling is identity in index space
    (void)ratio;
    double prev = std::arg(out.at(0, 0)), acc = prev;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i < 200; ++i) {
        const double ang = std::arg(out.at(0, i));
        if (i) {
            double d = ang - prev;
            while (d > kPi) d -= kTwoPi;
            while (d < -kPi) d += kTwoPi;
            acc += d;
        }
        prev = ang;
        sx += i; sy += acc; sxx += static_cast<double>(i) * i; sxy += i * acc; ++n;
    }
    const double slope_per_sample = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    // input slope 2*pi*cps per input sample; output grid step corresponds to
    // s*u_max input seconds per output sample, i.e. identity in index space,
    // so the slope per second is divided by s*(tau+t_d)
    const double slope_per_s2 = slope_per_sample / out.t_step;
    const double want = kTwoPi * cps / surf.t_step / (cfg.s * surf.u0);
    CHECK(std::abs(slope_per_s2 - want) / std::abs(want) < 1e-6);
}

TEST_CASE("va_transform maps the auto-term impulse to physical units") {
    EstimatorConfig cfg;
    SECTION("zero surface gives a zero plane") {
        SanitizedWindow win = make_window(120, 0.0, 0.0);
        for (cplx& v : win.samples) v = 0.0;
        const VaPlane plane = window_plane(win, cfg);
        for (double m : plane.mags) CHECK(m == 0.0);
    }
    SECTION("v = 1, a = 0 peaks at +38.7 Hz on the lag axis") {
        const SanitizedWindow win = dc_null(make_window(120, 1.0, 0.0));
        const VaPlane plane = window_plane(win, cfg);
        const std::vector<VaPeak> peaks = find_peaks(plane, 1);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].v_mps == Catch::Approx(1.0).margin(plane.v_step));
        CHECK(std::abs(peaks[0].a_mps2) <= plane.a_step);
        // raw lag-axis frequency of the refined peak
        const double f_tau = (peaks[0].row_refined - plane.n_v / 2.0) / (plane.n_v * win.dt_s);
        CHECK(f_tau == Catch::Approx(2.0 * kF * 1.0 / kC).epsilon(0.02));  // 38.7 Hz
    }
    SECTION("v = 1, a = 2, s = 1 peaks at +77.4 on the time axis") {
        const SanitizedWindow win = dc_null(make_window(120, 1.0, 2.0));
        const PsiaSurface scaled = scale(psia(win, cfg), cfg);
        const VaPlane plane = va_transform(scaled, cfg);
        const std::vector<VaPeak> peaks = find_peaks(plane, 1);
        REQUIRE(peaks.size() == 1);
        CHECK(peaks[0].a_mps2 == Catch::Approx(2.0).margin(plane.a_step));
        CHECK(peaks[0].v_mps == Catch::Approx(mid_velocity(120, 1.0, 2.0)).margin(plane.v_step));
        const double f_t = (peaks[0].col_refined - plane.n_a / 2.0) / (plane.n_a * scaled.t_step);
        CHECK(f_t == Catch::Approx(2.0 * kF * 2.0 / (cfg.s * kC)).epsilon(0.02));  // 77.4 1/s^2
    }
    SECTION("axes are strictly increasing") {
        const SanitizedWindow win = dc_null(make_window(120, 1.0, 1.0));
        const VaPlane plane = window_plane(win, cfg);
        for (int i = 1; i < plane.n_v; ++i) CHECK(plane.v_at(i) > plane.v_at(i - 1));
        for (int i = 1; i < plane.n_a; ++i) CHECK(plane.a_at(i) > plane.a_at(i - 1));
    }
}

TEST_CASE("plane energy matches the scaled surface energy (Parseval)") {
    EstimatorConfig cfg;
    const SanitizedWindow win = dc_null(add_noise(make_window(120, 0.9, 1.7), 0.01, 4));
    const PsiaSurface scaled = scale(psia(win, cfg), cfg);
    const VaPlane plane = va_transform(scaled, cfg);
    double plane_e = 0.0;
    for (double m : plane.mags) plane_e += m * m;
    plane_e /= static_cast<double>(plane.n_v) * plane.n_a;
    const double surf_e = energy(std::span<const cplx>(scaled.values));
    CHECK(plane_e == Catch::Approx(surf_e).epsilon(1e-3));
}

TEST_CASE("reported acceleration is invariant to the scaling factor") {
    const SanitizedWindow win = dc_null(make_window(120, 1.0, 2.0));
    rvec a_hat, f_t;
    for (double s : {0.5, 1.0, 2.0}) {
        EstimatorConfig cfg;
        cfg.s = s;
        const PsiaSurface scaled = scale(psia(win, cfg), cfg);
        const VaPlane plane = va_transform(scaled, cfg);
        const std::vector<VaPeak> pk = find_peaks(plane, 1);
        REQUIRE(pk.size() == 1);
        a_hat.push_back(pk[0].a_mps2);
        f_t.push_back((pk[0].col_refined - plane.n_a / 2.0) / (plane.n_a * scaled.t_step));
    }
    CHECK(std::abs(a_hat[0] - a_hat[1]) < 0.25);
    CHECK(std::abs(a_hat[2] - a_hat[1]) < 0.25);
    // raw bin frequency halves when s doubles
    CHECK(f_t[0] == Catch::Approx(2.0 * f_t[1]).epsilon(0.05));
    CHECK(f_t[2] == Catch::Approx(0.5 * f_t[1]).epsilon(0.05));
}

TEST_CASE("find_peaks behavior") {
    SECTION("all-equal plane: first bin wins, separation suppresses the rest") {
        VaPlane plane;
        plane.n_v = 16;
        plane.n_a = 16;
        plane.v0 = 0.0;
        plane.v_step = 1.0;
        plane.a0 = 0.0;
        plane.a_step = 1.0;
        plane.mags.assign(256, 1.0);
        const std::vector<VaPeak> pk = find_peaks(plane, 3, 8);
        REQUIRE(!pk.empty());
        CHECK(pk[0].row == 0);
        CHECK(pk[0].col == 0);
        for (std::size_t i = 1; i < pk.size(); ++i)
            CHECK(std::max(std::abs(pk[i].row - pk[0].row), std::abs(pk[i].col - pk[0].col)) >= 8);
    }
    SECTION("two targets come out strongest first") {
        EstimatorConfig cfg;
        SanitizedWindow win = make_window(120, 1.0, 1.5, kF, 1.0);
        const SanitizedWindow second = make_window(120, 0.4, -1.0, kF, 0.5);
        for (std::size_t i = 0; i < win.samples.size(); ++i) win.samples[i] += second.samples[i];
        const VaPlane plane = window_plane(dc_null(win), cfg);
        const std::vector<VaPeak> pk = find_peaks(plane, 2);
        REQUIRE(pk.size() == 2);
        CHECK(pk[0].magnitude >= pk[1].magnitude);
        CHECK(pk[0].v_mps == Catch::Approx(mid_velocity(120, 1.0, 1.5)).margin(plane.v_step));
        CHECK(pk[1].v_mps == Catch::Approx(mid_velocity(120, 0.4, -1.0)).margin(plane.v_step));
    }
    SECTION("max_targets must be positive") {
        VaPlane plane;
        plane.n_v = 4;
        plane.n_a = 4;
        plane.mags.assign(16, 0.0);
        CHECK_THROWS_AS(find_peaks(plane, 0), DataError);
    }
}

TEST_CASE("estimate_eliminate") {
    EstimatorConfig cfg;
    SECTION("single target, n_targets = 1 equals the plain peak read") {
        std::vector<SanitizedWindow> ws = {dc_null(make_window(120, 1.0, 1.5))};
        const EstimateSet es = estimate_eliminate(ws, cfg, 1);
        REQUIRE(es.targets.size() == 1);
        CHECK_FALSE(es.underpopulated);
        const VaPlane plane = averaged_plane(ws, cfg);
        const std::vector<VaPeak> pk = find_peaks(plane, 1);
        CHECK(es.targets[0].v_mps == pk[0].v_mps);
        CHECK(es.targets[0].a_mps2 == pk[0].a_mps2);
    }
    SECTION("two well-separated targets are both recovered") {
        Rng rng(11);
        std::vector<SanitizedWindow> ws;
        for (int k = 0; k < 8; ++k) {
            const double f = kF + (k - 4) * 80e6 / 256.0;
            SanitizedWindow w = make_window(120, 1.0, 1.5, f, 1.0);
            const SanitizedWindow second = make_window(120, 0.5, -1.0, f, 0.5);
            for (std::size_t i = 0; i < w.samples.size(); ++i) {
                w.samples[i] += second.samples[i] + rng.cnormal(0.01);
            }
            ws.push_back(dc_null(w));
        }
        const EstimateSet es = estimate_eliminate(ws, cfg, 2);
        REQUIRE(es.targets.size() == 2);
        const VaPlane probe = averaged_plane(ws, cfg);
        CHECK(es.targets[0].v_mps == Catch::Approx(mid_velocity(120, 1.0, 1.5)).margin(probe.v_step));
        CHECK(es.targets[0].a_mps2 == Catch::Approx(1.5).margin(probe.a_step));
        CHECK(es.targets[1].v_mps == Catch::Approx(mid_velocity(120, 0.5, -1.0)).margin(probe.v_step));
        CHECK(es.targets[1].a_mps2 == Catch::Approx(-1.0).margin(probe.a_step));
    }
    SECTION("asking for two targets on single-target data flags underpopulated") {
        std::vector<SanitizedWindow> ws = {dc_null(make_window(120, 1.0, 1.5))};
        const EstimateSet es = estimate_eliminate(ws, cfg, 2, 1e-3);
        CHECK(es.targets.size() == 1);
        CHECK(es.underpopulated);
    }
}

TEST_CASE("static-only content leaves no peak after DC nulling") {
    EstimatorConfig cfg;
    // constant window = direct + static reflections only
    SanitizedWindow stat = make_window(120, 0.0, 0.0);
    const VaPlane plane_static = window_plane(dc_null(stat), cfg);
    const VaPlane plane_target = window_plane(dc_null(make_window(120, 1.0, 1.5)), cfg);
    double mx_static = 0.0, mx_target = 0.0;
    for (double m : plane_static.mags) mx_static = std::max(mx_static, m);
    for (double m : plane_target.mags) mx_target = std::max(mx_target, m);
    CHECK(mx_static <= 1e-9 * mx_target);
}
