#include <catch2/catch_amalgamated.hpp>

#include "dpace/preprocess.hpp"
#include "dpace/profiles.hpp"

using namespace dpace;

namespace {

RadioConfig small_radio(int antennas = 2) {
    RadioConfig r;
    r.n_subcarriers = 8;
    r.n_antennas = antennas;
    return r;
}

ChannelScenario moving_scenario(double duration, std::uint64_t seed) {
    return make_single_target_scenario(make_constant_profile(1.0, 0.8, duration + 0.1), duration, seed,
                                       kNoiselessSnr, small_radio(3));
}

}  // namespace

TEST_CASE("phase errors cancel exactly in the conjugate product") {
    ChannelScenario clean = moving_scenario(0.3, 5);
    ChannelScenario dirty = clean;
    dirty.impairments.pdd_s = 2e-9;
    dirty.impairments.sfo_s_per_s = 1e-9;
    dirty.impairments.cfo_cycles = 0.05;
    const SanitizedStream a = sanitize_stream(synthesize(clean).stream);
    const SanitizedStream b = sanitize_stream(synthesize(dirty).stream);
    REQUIRE(a.size() == b.size());
    double max_rel = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        for (std::size_t i = 0; i < a.frames[p].g.size(); ++i) {
            const double scale = std::max(1.0, std::abs(a.frames[p].g[i]));
            max_rel = std::max(max_rel, std::abs(a.frames[p].g[i] - b.frames[p].g[i]) / scale);
        }
    }
    CHECK(max_rel <= 1e-12);
}

TEST_CASE("one direct path per antenna sanitizes to the delay difference") {
    RadioConfig radio = small_radio(3);
    ChannelScenario sc;
    sc.radio = radio;
    sc.duration_s = 0.01;
    PathSpec direct;
    direct.kind = PathKind::direct;
    direct.tof_s = 5e-9;
    direct.antenna_tof_step_s = 2e-10;
    sc.paths = {direct};
    const SynthResult res = synthesize(sc);
    const SanitizedFrame sf = conjugate_sanitize(res.stream.frames[0]);
    for (int pair = 0; pair < sf.n_pairs; ++pair) {
        for (int k = 0; k < sf.n_subcarriers; ++k) {
            const double fk = radio.subcarrier_hz(k);
            const cplx want = std::polar(1.0, -kTwoPi * fk * (pair + 1) * direct.antenna_tof_step_s);
            CHECK(std::abs(sf.at(pair, k) - want) < 1e-12);
        }
    }
}

TEST_CASE("degenerate sanitization inputs") {
    CsiFrame zero;
    zero.n_antennas = 2;
    zero.n_subcarriers = 4;
    zero.h.assign(8, cplx(0.0, 0.0));
    const SanitizedFrame sf = conjugate_sanitize(zero);
    for (const cplx& v : sf.g) CHECK(v == cplx(0.0, 0.0));

    CsiFrame single;
    single.n_antennas = 1;
    single.n_subcarriers = 4;
    single.h.assign(4, cplx(1.0, 0.0));
    CHECK_THROWS_WITH(conjugate_sanitize(single), "no reference channel");
}

TEST_CASE("window extraction") {
    const SanitizedStream ss = sanitize_stream(synthesize(moving_scenario(0.2, 9)).stream);
    const std::size_t n = ss.size();
    const SanitizedWindow full = window(ss, 0, 2, 0, n);
    CHECK(full.length() == n);
    CHECK(full.f_hz == ss.radio.subcarrier_hz(2));
    const SanitizedWindow w1 = window(ss, 0, 2, 10, 40);
    const SanitizedWindow w2 = window(ss, 0, 2, 30, 40);
    for (int i = 0; i < 20; ++i) CHECK(w1.samples[static_cast<std::size_t>(30 - 10 + i)] == w2.samples[static_cast<std::size_t>(i)]);
    CHECK_THROWS_WITH(window(ss, 0, 2, n - 10, 20), "window exceeds stream");
}

TEST_CASE("null_zero_frequency removes exactly the DC bin") {
    SECTION("constant goes to zero") {
        cvec c(32, cplx(2.5, -1.0));
        const cvec out = null_zero_frequency(c);
        for (const cplx& v : out) CHECK(std::abs(v) < 1e-14);
    }
    SECTION("non-DC tone is untouched") {
        const std::size_t w = 48;
        cvec x(w);
        for (std::size_t i = 0; i < w; ++i)
            x[i] = std::polar(1.0, kTwoPi * 3.0 * static_cast<double>(i) / static_cast<double>(w));
        const cvec out = null_zero_frequency(x);
        for (std::size_t i = 0; i < w; ++i) CHECK(std::abs(out[i] - x[i]) <= 1e-12);
    }
    SECTION("constant plus tone leaves the tone (subtraction oracle)") {
        const std::size_t w = 40;
        cvec tone(w), mix(w);
        for (std::size_t i = 0; i < w; ++i) {
            tone[i] = std::polar(0.7, kTwoPi * 5.0 * static_cast<double>(i) / static_cast<double>(w) + 0.4);
            mix[i] = tone[i] + cplx(1.3, -0.2);
        }
        const cvec out = null_zero_frequency(mix);
        for (std::size_t i = 0; i < w; ++i) CHECK(std::abs(out[i] - tone[i]) <= 1e-12);
    }
    SECTION("output mean is zero and the op is idempotent") {
        cvec x(37);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = cplx(std::sin(0.3 * static_cast<double>(i)), std::cos(1.1 * static_cast<double>(i)));
        const cvec once = null_zero_frequency(x);
        cplx mean(0.0, 0.0);
        for (const cplx& v : once) mean += v;
        CHECK(std::abs(mean) / static_cast<double>(x.size()) < 1e-13);
        const cvec twice = null_zero_frequency(once);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(twice[i] - once[i]) < 1e-13);
    }
    SECTION("linearity") {
        cvec x(24), y(24);
        for (std::size_t i = 0; i < 24; ++i) {
            x[i] = cplx(static_cast<double>(i) * 0.1, 1.0);
            y[i] = cplx(std::cos(0.8 * static_cast<double>(i)), -0.3);
        }
        const cplx alpha(0.6, 0.2), beta(-1.1, 0.9);
        cvec mix(24);
        for (std::size_t i = 0; i < 24; ++i) mix[i] = alpha * x[i] + beta * y[i];
        const cvec lhs = null_zero_frequency(mix);
        const cvec nx = null_zero_frequency(x), ny = null_zero_frequency(y);
        for (std::size_t i = 0; i < 24; ++i)
            CHECK(std::abs(lhs[i] - (alpha * nx[i] + beta * ny[i])) < 1e-12);
    }
    SECTION("guard band removes neighboring bins too") {
        const std::size_t w = 30;
        cvec x(w);
        for (std::size_t i = 0; i < w; ++i) {
            x[i] = std::polar(1.0, kTwoPi * 1.0 * static_cast<double>(i) / static_cast<double>(w)) +
                   std::polar(0.5, kTwoPi * 7.0 * static_cast<double>(i) / static_cast<double>(w));
        }
        const cvec out = null_zero_frequency(x, 2);
        // bin 1 removed, bin 7 kept
        for (std::size_t i = 0; i < w; ++i) {
            const cplx want = std::polar(0.5, kTwoPi * 7.0 * static_cast<double>(i) / static_cast<double>(w));
            CHECK(std::abs(out[i] - want) < 1e-12);
        }
    }
}

TEST_CASE("static-only scenario is suppressed below 1e-20 of input energy") {
    RadioConfig radio = small_radio(2);
    ChannelScenario sc;
    sc.radio = radio;
    sc.duration_s = 0.2;
    PathSpec direct;
    direct.kind = PathKind::direct;
    direct.tof_s = 3e-9;
    PathSpec wall;
    wall.kind = PathKind::static_reflection;
    wall.amplitude = {0.3, 0.0};
    wall.ref_gain = 0.1;
    wall.tof_s = 2.2e-8;
    sc.paths = {direct, wall};
    const SanitizedStream ss = sanitize_stream(synthesize(sc).stream);
    for (int k = 0; k < radio.n_subcarriers; ++k) {
        const SanitizedWindow w = window(ss, 0, k, 0, ss.size());
        const SanitizedWindow j = null_zero_frequency(w);
        const double e_in = energy(std::span<const cplx>(w.samples));
        const double e_out = energy(std::span<const cplx>(j.samples));
        CHECK(e_out <= 1e-20 * e_in);
    }
}
