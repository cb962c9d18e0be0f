#include <catch2/catch_amalgamated.hpp>

#include "dpace/config.hpp"

using namespace dpace;

TEST_CASE("pipeline config parse/format round trip is the identity") {
    PipelineConfig cfg;
    cfg.trace.w = 80;
    cfg.trace.stride = 20;
    cfg.trace.n_targets = 2;
    cfg.trace.cutoff_hz = 7.5;
    cfg.trace.xi = 0.3;
    cfg.trace.estimator.s = 2.0;
    cfg.classifier.gamma = 0.25;
    cfg.radio.n_subcarriers = 16;
    cfg.impairments.noise_power = 1e-4;
    cfg.scenario_path = "walk.scenario";
    cfg.seed = 77;
    const std::string text = format_pipeline_config(cfg);
    const PipelineConfig back = parse_pipeline_config(text);
    CHECK(format_pipeline_config(back) == text);
    CHECK(back.trace.w == 80);
    CHECK(back.trace.estimator.s == 2.0);
    CHECK(back.seed == 77);
    CHECK(back.scenario_path == "walk.scenario");
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_WITH(parse_pipeline_config("trace.w = 120\nbogus_key = 3\n"),
                      "config: unknown key 'bogus_key'");
    CHECK_THROWS_AS(parse_pipeline_config("trace.w = twelve\n"), DataError);
    CHECK_THROWS_AS(parse_pipeline_config("trace.w\n"), DataError);
    CHECK_THROWS_AS(parse_pipeline_config("trace.w = 120\ntrace.w = 60\n"), DataError);
}

TEST_CASE("spec shorthand keys map onto the trace section") {
    const PipelineConfig cfg = parse_pipeline_config("W = 60\nstride = 15\ncutoff_hz = 5\nxi = 2\nn_targets = 2\n");
    CHECK(cfg.trace.w == 60);
    CHECK(cfg.trace.stride == 15);
    CHECK(cfg.trace.cutoff_hz == 5.0);
    CHECK(cfg.trace.xi == 2.0);
    CHECK(cfg.trace.n_targets == 2);
}

TEST_CASE("comments and blank lines are ignored") {
    const PipelineConfig cfg = parse_pipeline_config("# header\n\ntrace.w = 40  # trailing\n");
    CHECK(cfg.trace.w == 40);
}

TEST_CASE("scenario parse/format round trip") {
    ChannelScenario sc;
    sc.radio.n_subcarriers = 8;
    sc.duration_s = 1.5;
    sc.seed = 5;
    sc.profiles.push_back(KinematicProfile({{0.75, 1.0, 0.4}, {0.9, 1.3, -0.4}}));
    PathSpec direct;
    direct.kind = PathKind::direct;
    direct.tof_s = 2e-9;
    PathSpec mover;
    mover.kind = PathKind::dynamic;
    mover.amplitude = {0.1, 0.02};
    mover.tof_s = 4e-8;
    mover.profile = 0;
    sc.paths = {direct, mover};
    sc.events.push_back({1, 0.5, 0.9, "fall"});
    const std::string text = format_scenario(sc);
    const ChannelScenario back = parse_scenario(text);
    CHECK(format_scenario(back) == text);
    CHECK(back.paths.size() == 2);
    CHECK(back.paths[1].amplitude == cplx(0.1, 0.02));
    CHECK(back.profiles.size() == 1);
    CHECK(back.profiles[0].pieces().size() == 2);
    CHECK(back.events.size() == 1);
    CHECK(back.events[0].label == "fall");
}

TEST_CASE("scenario validation failures surface as data errors") {
    CHECK_THROWS_AS(parse_scenario("duration_s = 1\n"), DataError);  // no paths
    CHECK_THROWS_AS(parse_scenario("duration_s = 1\npath.0.kind = warp\n"), DataError);
    CHECK_THROWS_AS(parse_scenario("duration_s = 1\npath.0.kind = dynamic\npath.0.profile = 0\n"),
                    DataError);  // missing profile
    CHECK_THROWS_AS(
        parse_scenario("duration_s = 1\npath.0.kind = direct\nprofile.0.piece.0 = 1.0 1.0\n"),
        DataError);  // malformed piece
}
