// dpace: command-line front end for the DP-AcE pipeline.
//
//   dpace synth|estimate|trace|features|train|detect|eval --config <file> [--seed N] [--out DIR]
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dpace/dpace.hpp"

namespace fs = std::filesystem;
using namespace dpace;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

PipelineConfig load_config(const std::string& path) {
    if (path.empty()) return PipelineConfig{};
    return parse_pipeline_config(read_text(path));
}

fs::path prepare_out(const std::string& out) {
    fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
    fs::create_directories(dir);
    return dir;
}

void write_trace_csv(const fs::path& path, const std::vector<AccelTrace>& traces) {
    CsvWriter w(path.string());
    w.row({"time_s", "a_raw", "a_smooth", "target_id", "is_peak", "v_raw"});
    for (const AccelTrace& tr : traces) {
        std::vector<char> is_peak(tr.size(), 0);
        if (tr.a_smooth.size() >= 4)
            for (std::size_t p : ampd(tr.a_smooth)) is_peak[p] = 1;
        for (std::size_t i = 0; i < tr.size(); ++i) {
            w.row({format_double(tr.times_s[i]), format_double(tr.a_raw[i]),
                   format_double(tr.a_smooth.empty() ? tr.a_raw[i] : tr.a_smooth[i]),
                   std::to_string(tr.target_id), is_peak[i] ? "1" : "0", format_double(tr.v_raw[i])});
        }
    }
}

struct LoadedTrace {
    std::vector<AccelTrace> traces;
    std::vector<std::vector<std::size_t>> peaks;  // per target
};

LoadedTrace read_trace_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t ct = t.column("time_s"), ca = t.column("a_raw"), cs = t.column("a_smooth"),
                      cid = t.column("target_id"), cp = t.column("is_peak"), cv = t.column("v_raw");
    LoadedTrace out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int id = static_cast<int>(t.number(r, cid));
        while (static_cast<int>(out.traces.size()) <= id) {
            out.traces.push_back(AccelTrace{static_cast<int>(out.traces.size()), {}, {}, {}, {}});
            out.peaks.emplace_back();
        }
        AccelTrace& tr = out.traces[static_cast<std::size_t>(id)];
        tr.times_s.push_back(t.number(r, ct));
        tr.a_raw.push_back(t.number(r, ca));
        tr.a_smooth.push_back(t.number(r, cs));
        tr.v_raw.push_back(t.number(r, cv));
        if (t.number(r, cp) != 0.0) out.peaks[static_cast<std::size_t>(id)].push_back(tr.size() - 1);
    }
    return out;
}

void write_features_csv(const fs::path& path, const std::vector<FeatureVector>& features) {
    CsvWriter w(path.string());
    w.row({"rtm", "rmedian", "rmode", "rextdev", "rstd", "riqr", "skew", "kurt", "flag_rtm",
           "flag_rmedian", "flag_rmode", "flag_rextdev", "flag_rstd", "flag_riqr", "target_id",
           "t_begin_s", "t_end_s", "label"});
    for (const FeatureVector& f : features) {
        std::vector<std::string> cells;
        for (double v : f.values) cells.push_back(format_double(v));
        for (double v : f.flags) cells.push_back(format_double(v));
        cells.push_back(std::to_string(f.target_id));
        cells.push_back(format_double(f.t_begin_s));
        cells.push_back(format_double(f.t_end_s));
        cells.push_back(std::to_string(f.label));
        w.row(cells);
    }
}

std::vector<FeatureVector> read_features_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const char* names[] = {"rtm", "rmedian", "rmode", "rextdev", "rstd", "riqr", "skew", "kurt"};
    const char* flag_names[] = {"flag_rtm", "flag_rmedian", "flag_rmode", "flag_rextdev",
                                "flag_rstd", "flag_riqr"};
    std::vector<FeatureVector> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        FeatureVector f;
        for (int i = 0; i < kFeatureCount; ++i)
            f.values[static_cast<std::size_t>(i)] = t.number(r, t.column(names[i]));
        for (int i = 0; i < kFlagCount; ++i)
            f.flags[static_cast<std::size_t>(i)] = t.number(r, t.column(flag_names[i]));
        f.target_id = static_cast<int>(t.number(r, t.column("target_id")));
        f.t_begin_s = t.number(r, t.column("t_begin_s"));
        f.t_end_s = t.number(r, t.column("t_end_s"));
        f.label = static_cast<int>(t.number(r, t.column("label")));
        f.segment_index = static_cast<int>(r);
        out.push_back(f);
    }
    return out;
}

void write_plane_csv(const fs::path& path, const VaPlane& plane) {
    CsvWriter w(path.string());
    std::vector<std::string> head(1, "");
    for (int a = 0; a < plane.n_a; ++a) head.push_back(format_double(plane.a_at(a)));
    w.row(head);
    for (int v = 0; v < plane.n_v; ++v) {
        std::vector<std::string> cells(1, format_double(plane.v_at(v)));
        for (int a = 0; a < plane.n_a; ++a) cells.push_back(format_double(plane.mag(v, a)));
        w.row(cells);
    }
}

int cmd_synth(const std::string& config_path, const std::string& scenario_path, long seed_override,
              const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    const std::string sc_path = scenario_path.empty() ? cfg.scenario_path : scenario_path;
    if (sc_path.empty()) throw DataError("synth: no scenario file given");
    ChannelScenario sc = parse_scenario(read_text(sc_path), cfg.radio, cfg.impairments);
    if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
    const fs::path dir = prepare_out(out);
    SynthResult res = synthesize(sc);
    write_stream((dir / "stream.dpac").string(), res.stream);
    write_ground_truth((dir / "ground_truth.csv").string(), res.truth);
    if (!res.truth.events.empty()) write_events((dir / "events.csv").string(), res.truth.events);
    std::cout << res.stream.size() << " packets written\n";
    return 0;
}

int cmd_estimate(const std::string& config_path, const std::string& stream_path, long max_windows,
                 const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    const CsiStream stream = read_stream(stream_path);
    if (stream.size() < static_cast<std::size_t>(cfg.trace.w)) throw DataError("estimate: stream shorter than window");
    const SanitizedStream ss = sanitize_stream(stream);
    const fs::path dir = prepare_out(out);
    const int stride = cfg.trace.effective_stride();
    const std::size_t n_windows = (stream.size() - static_cast<std::size_t>(cfg.trace.w)) / static_cast<std::size_t>(stride) + 1;
    const std::size_t dump = (max_windows <= 0) ? n_windows : std::min<std::size_t>(static_cast<std::size_t>(max_windows), n_windows);

    CsvWriter peaks((dir / "peaks.csv").string());
    peaks.row({"window_index", "time_s", "v_mps", "a_mps2", "magnitude"});
    char name[32];
    for (std::size_t wi = 0; wi < dump; ++wi) {
        const std::size_t start = wi * static_cast<std::size_t>(stride);
        const VaPlane plane = averaged_plane(windows_at(ss, start, cfg.trace), cfg.trace.estimator);
        std::snprintf(name, sizeof(name), "plane_%04zu.csv", wi);
        write_plane_csv(dir / name, plane);
        const double t_mid = (static_cast<double>(start) + (cfg.trace.w - 1) / 2.0) * stream.radio.dt_s();
        for (const VaPeak& pk : find_peaks(plane, cfg.trace.n_targets))
            peaks.row({std::to_string(wi), format_double(t_mid), format_double(pk.v_mps),
                       format_double(pk.a_mps2), format_double(pk.magnitude)});
    }
    std::cout << dump << " windows estimated\n";
    return 0;
}

int cmd_trace(const std::string& config_path, const std::string& stream_path, const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    const CsiStream stream = read_stream(stream_path);
    const TraceBundle bundle = run_traces(stream, cfg.trace);
    const fs::path dir = prepare_out(out);
    write_trace_csv(dir / "trace.csv", bundle.traces);
    std::cout << bundle.traces.size() << " traces, " << (bundle.traces.empty() ? 0 : bundle.traces[0].size())
              << " samples each\n";
    return 0;
}

int cmd_features(const std::string& config_path, const std::string& trace_path,
                 const std::string& events_path, const std::string& truth_path,
                 const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    LoadedTrace lt = read_trace_csv(trace_path);
    std::vector<FeatureVector> all;
    for (std::size_t t = 0; t < lt.traces.size(); ++t) {
        SegmentedTrace seg;
        seg.peaks = lt.peaks[t];
        seg.segments = segment(lt.traces[t].a_smooth.size(), seg.peaks);
        std::vector<FeatureVector> fv = trace_features(lt.traces[t], seg);
        all.insert(all.end(), fv.begin(), fv.end());
    }
    if (!events_path.empty()) {
        if (truth_path.empty()) throw DataError("features: labeling needs --truth with --events");
        GroundTruth gt = read_ground_truth(truth_path);
        gt.events = read_events(events_path);
        const TruthSeries ts = TruthSeries::build(gt, 1.0 / cfg.radio.packet_rate_hz);
        label_features_by_segment(all, gt.events, lt.traces, ts);
    }
    const fs::path dir = prepare_out(out);
    write_features_csv(dir / "features.csv", all);
    std::cout << all.size() << " feature vectors\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& feature_paths,
              const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (const std::string& p : feature_paths) {
        for (const FeatureVector& f : read_features_csv(p)) {
            if (f.label == 0) continue;
            x.push_back(f.as_input());
            y.push_back(f.label);
        }
    }
    if (x.empty()) throw DataError("train: no labeled feature rows");
    const SvmModel model = svm_train(x, y, cfg.classifier.gamma, cfg.classifier.C);
    const fs::path dir = prepare_out(out);
    std::ofstream os(dir / "model.txt");
    save_model(os, model);
    std::cout << model.support_vectors.size() << " support vectors\n";
    return 0;
}

int cmd_detect(const std::string& model_path, const std::string& features_path, const std::string& out) {
    std::ifstream is(model_path);
    if (!is) throw DataError("cannot open: " + model_path);
    const SvmModel model = load_model(is);
    const std::vector<FeatureVector> features = read_features_csv(features_path);
    const DetectionReport report = detect(model, features);
    const fs::path dir = prepare_out(out);
    CsvWriter w((dir / "detections.csv").string());
    w.row({"target_id", "t_begin_s", "t_end_s", "decision", "fall"});
    for (const DetectionRow& r : report.rows)
        w.row({std::to_string(r.target_id), format_double(r.t_begin_s), format_double(r.t_end_s),
               format_double(r.decision), r.fall ? "1" : "0"});
    std::cout << report.rows.size() << " segments classified\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& trace_path,
             const std::string& detections_path, const std::string& truth_path,
             const std::string& events_path, const std::string& out) {
    PipelineConfig cfg = load_config(config_path);
    LoadedTrace lt = read_trace_csv(trace_path);
    GroundTruth gt = read_ground_truth(truth_path);
    if (!events_path.empty()) gt.events = read_events(events_path);

    DetectionReport det;
    const CsvTable t = read_csv(detections_path);
    const std::size_t cid = t.column("target_id"), cb = t.column("t_begin_s"), ce = t.column("t_end_s"),
                      cd = t.column("decision"), cf = t.column("fall");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        DetectionRow row;
        row.target_id = static_cast<int>(t.number(r, cid));
        row.t_begin_s = t.number(r, cb);
        row.t_end_s = t.number(r, ce);
        row.decision = t.number(r, cd);
        row.fall = t.number(r, cf) != 0.0;
        det.rows.push_back(row);
    }

    const EvalReport rep = evaluate(lt.traces, det, gt, 1.0 / cfg.radio.packet_rate_hz);
    const fs::path dir = prepare_out(out);
    CsvWriter w((dir / "report.csv").string());
    w.row({"tpr", "fpr", "accel_median_pct_err", "distance_pct_err"});
    w.row({rep.tpr_applicable() ? format_double(rep.tpr) : "na", format_double(rep.fpr),
           format_double(rep.accel_median_pct_err), format_double(rep.distance_pct_err)});
    std::cout << "tpr=" << (rep.tpr_applicable() ? format_double(rep.tpr) : "na") << " fpr=" << rep.fpr
              << " accel_median_pct_err=" << rep.accel_median_pct_err
              << " distance_pct_err=" << rep.distance_pct_err << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DP-AcE: CSI velocity-acceleration estimation and fall detection"};
    app.require_subcommand(1);

    std::string config, scenario, stream, trace_path, events, truth, model, detections, out = ".";
    std::vector<std::string> feature_paths;
    long seed = -1, windows = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config, "pipeline config file");
        cmd->add_option("--out", out, "output directory");
    };

    CLI::App* synth = app.add_subcommand("synth", "synthesize a CSI stream from a scenario");
    add_common(synth);
    synth->add_option("--scenario", scenario, "scenario file");
    synth->add_option("--seed", seed, "seed override");

    CLI::App* estimate = app.add_subcommand("estimate", "dump V-A planes and peaks");
    add_common(estimate);
    estimate->add_option("--stream", stream, "DPAC stream file")->required();
    estimate->add_option("--windows", windows, "windows to dump (0 = all)");

    CLI::App* trace_cmd = app.add_subcommand("trace", "sliding-window acceleration trace");
    add_common(trace_cmd);
    trace_cmd->add_option("--stream", stream, "DPAC stream file")->required();

    CLI::App* features = app.add_subcommand("features", "segment features from a trace");
    add_common(features);
    features->add_option("--trace", trace_path, "trace.csv from the trace stage")->required();
    features->add_option("--events", events, "labeled event intervals for supervision");
    features->add_option("--truth", truth, "ground-truth CSV (target attribution)");

    CLI::App* train = app.add_subcommand("train", "train the fall classifier");
    add_common(train);
    train->add_option("--features", feature_paths, "labeled features.csv (repeatable)")->required();

    CLI::App* detect_cmd = app.add_subcommand("detect", "classify segments");
    detect_cmd->add_option("--out", out, "output directory");
    detect_cmd->add_option("--model", model, "model file")->required();
    detect_cmd->add_option("--features", trace_path, "features.csv")->required();

    CLI::App* eval_cmd = app.add_subcommand("eval", "score detections against ground truth");
    add_common(eval_cmd);
    eval_cmd->add_option("--trace", trace_path, "trace.csv")->required();
    eval_cmd->add_option("--detections", detections, "detections.csv")->required();
    eval_cmd->add_option("--truth", truth, "ground_truth.csv")->required();
    eval_cmd->add_option("--events", events, "events.csv with fall intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return cmd_synth(config, scenario, seed, out);
        if (estimate->parsed()) return cmd_estimate(config, stream, windows, out);
        if (trace_cmd->parsed()) return cmd_trace(config, stream, out);
        if (features->parsed()) return cmd_features(config, trace_path, events, truth, out);
        if (train->parsed()) return cmd_train(config, feature_paths, out);
        if (detect_cmd->parsed()) return cmd_detect(model, trace_path, out);
        if (eval_cmd->parsed()) return cmd_eval(config, trace_path, detections, truth, events, out);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
