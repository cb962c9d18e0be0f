#pragma once

// 'key = value' configuration text with '#' comments. Unknown keys are
// rejected; parse -> format -> parse is the identity on canonical files.

#include <map>
#include <set>
#include <sstream>

#include "dpace/csv.hpp"
#include "dpace/features.hpp"
#include "dpace/scenario.hpp"
#include "dpace/trace.hpp"

namespace dpace {

class KeyValues {
public:
    static KeyValues parse(const std::string& text) {
        KeyValues kv;
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw DataError("config line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty()) throw DataError("config line " + std::to_string(lineno) + ": empty key");
            if (kv.values_.count(key)) throw DataError("config: duplicate key '" + key + "'");
            kv.values_[key] = value;
        }
        return kv;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        taken_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        taken_.insert(key);
        return parse_double_strict(it->second, key);
    }

    long get_long(const std::string& key, long fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        taken_.insert(key);
        const double v = parse_double_strict(it->second, key);
        const long l = static_cast<long>(v);
        if (static_cast<double>(l) != v) throw DataError("config: '" + key + "' must be an integer");
        return l;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        taken_.insert(key);
        try {
            return std::stoull(it->second);
        } catch (...) {
            throw DataError("config: '" + key + "' must be a non-negative integer");
        }
    }

    // Keys with a given prefix, for indexed blocks like path.0.*.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (k.rfind(prefix, 0) == 0) out.push_back(k);
        return out;
    }

    void reject_unknown() const {
        for (const auto& [k, v] : values_)
            if (!taken_.count(k)) throw DataError("config: unknown key '" + k + "'");
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t");
        std::size_t e = s.find_last_not_of(" \t");
        if (b == std::string::npos) return "";
        return s.substr(b, e - b + 1);
    }
    static double parse_double_strict(const std::string& s, const std::string& key) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw DataError("");
            return v;
        } catch (...) {
            throw DataError("config: '" + key + "' must be a number, got '" + s + "'");
        }
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> taken_;
};

struct ClassifierConfig {
    double gamma = 1.0 / kFeatureCount;
    double C = 10.0;
};

struct PipelineConfig {
    TraceConfig trace;
    ClassifierConfig classifier;
    RadioConfig radio;            // defaults for scenarios that omit radio keys
    ImpairmentSpec impairments;   // likewise
    std::string scenario_path;
    std::uint64_t seed = 0;
};

namespace configdetail {

inline void parse_radio(KeyValues& kv, const std::string& prefix, RadioConfig& r) {
    r.carrier_hz = kv.get_double(prefix + "carrier_hz", r.carrier_hz);
    r.bandwidth_hz = kv.get_double(prefix + "bandwidth_hz", r.bandwidth_hz);
    r.n_subcarriers = static_cast<int>(kv.get_long(prefix + "n_subcarriers", r.n_subcarriers));
    r.n_antennas = static_cast<int>(kv.get_long(prefix + "n_antennas", r.n_antennas));
    r.packet_rate_hz = kv.get_double(prefix + "packet_rate_hz", r.packet_rate_hz);
    r.c_mps = kv.get_double(prefix + "c_mps", r.c_mps);
}

inline void parse_impairments(KeyValues& kv, const std::string& prefix, ImpairmentSpec& s) {
    s.pdd_s = kv.get_double(prefix + "pdd_s", s.pdd_s);
    s.sfo_s_per_s = kv.get_double(prefix + "sfo_s_per_s", s.sfo_s_per_s);
    s.cfo_cycles = kv.get_double(prefix + "cfo_cycles", s.cfo_cycles);
    s.noise_power = kv.get_double(prefix + "noise_power", s.noise_power);
}

inline void parse_estimator(KeyValues& kv, EstimatorConfig& e) {
    e.s = kv.get_double("estimator.s", e.s);
    e.t_d_s = kv.get_double("estimator.t_d_s", e.t_d_s);
    e.lag_count = static_cast<int>(kv.get_long("estimator.lag_count", e.lag_count));
    e.pad_t = static_cast<int>(kv.get_long("estimator.pad_t", e.pad_t));
    e.pad_tau = static_cast<int>(kv.get_long("estimator.pad_tau", e.pad_tau));
    e.f_ref_hz = kv.get_double("estimator.f_ref_hz", e.f_ref_hz);
    e.c_mps = kv.get_double("estimator.c_mps", e.c_mps);
    e.interp_taps = static_cast<int>(kv.get_long("estimator.interp_taps", e.interp_taps));
    e.interp_beta = kv.get_double("estimator.interp_beta", e.interp_beta);
}

}  // namespace configdetail

inline PipelineConfig parse_pipeline_config(const std::string& text) {
    KeyValues kv = KeyValues::parse(text);
    PipelineConfig cfg;
    // spec-named shorthands for the trace stage
    cfg.trace.w = static_cast<int>(kv.get_long("W", cfg.trace.w));
    cfg.trace.stride = static_cast<int>(kv.get_long("stride", cfg.trace.stride));
    cfg.trace.cutoff_hz = kv.get_double("cutoff_hz", cfg.trace.cutoff_hz);
    cfg.trace.xi = kv.get_double("xi", cfg.trace.xi);
    cfg.trace.n_targets = static_cast<int>(kv.get_long("n_targets", cfg.trace.n_targets));
    // canonical dotted keys
    cfg.trace.w = static_cast<int>(kv.get_long("trace.w", cfg.trace.w));
    cfg.trace.stride = static_cast<int>(kv.get_long("trace.stride", cfg.trace.stride));
    cfg.trace.cutoff_hz = kv.get_double("trace.cutoff_hz", cfg.trace.cutoff_hz);
    cfg.trace.xi = kv.get_double("trace.xi", cfg.trace.xi);
    cfg.trace.n_targets = static_cast<int>(kv.get_long("trace.n_targets", cfg.trace.n_targets));
    cfg.trace.max_fused_subcarriers =
        static_cast<int>(kv.get_long("trace.max_fused_subcarriers", cfg.trace.max_fused_subcarriers));
    cfg.trace.guard_bins = static_cast<int>(kv.get_long("trace.guard_bins", cfg.trace.guard_bins));
    cfg.trace.residual_energy_ratio =
        kv.get_double("trace.residual_energy_ratio", cfg.trace.residual_energy_ratio);
    configdetail::parse_estimator(kv, cfg.trace.estimator);
    cfg.classifier.gamma = kv.get_double("classifier.gamma", cfg.classifier.gamma);
    cfg.classifier.C = kv.get_double("classifier.C", cfg.classifier.C);
    configdetail::parse_radio(kv, "radio.", cfg.radio);
    configdetail::parse_impairments(kv, "impair.", cfg.impairments);
    cfg.scenario_path = kv.get_string("scenario", cfg.scenario_path);
    cfg.seed = kv.get_u64("seed", cfg.seed);
    kv.reject_unknown();
    if (cfg.trace.w < 8) throw DataError("config: trace.w must be >= 8");
    if (cfg.trace.n_targets < 1) throw DataError("config: trace.n_targets must be >= 1");
    return cfg;
}

inline std::string format_pipeline_config(const PipelineConfig& cfg) {
    std::ostringstream os;
    os << "trace.w = " << cfg.trace.w << "\n";
    os << "trace.stride = " << cfg.trace.stride << "\n";
    os << "trace.n_targets = " << cfg.trace.n_targets << "\n";
    os << "trace.cutoff_hz = " << format_double(cfg.trace.cutoff_hz) << "\n";
    os << "trace.xi = " << format_double(cfg.trace.xi) << "\n";
    os << "trace.max_fused_subcarriers = " << cfg.trace.max_fused_subcarriers << "\n";
    os << "trace.guard_bins = " << cfg.trace.guard_bins << "\n";
    os << "trace.residual_energy_ratio = " << format_double(cfg.trace.residual_energy_ratio) << "\n";
    os << "estimator.s = " << format_double(cfg.trace.estimator.s) << "\n";
    os << "estimator.t_d_s = " << format_double(cfg.trace.estimator.t_d_s) << "\n";
    os << "estimator.lag_count = " << cfg.trace.estimator.lag_count << "\n";
    os << "estimator.pad_t = " << cfg.trace.estimator.pad_t << "\n";
    os << "estimator.pad_tau = " << cfg.trace.estimator.pad_tau << "\n";
    os << "estimator.f_ref_hz = " << format_double(cfg.trace.estimator.f_ref_hz) << "\n";
    os << "estimator.c_mps = " << format_double(cfg.trace.estimator.c_mps) << "\n";
    os << "estimator.interp_taps = " << cfg.trace.estimator.interp_taps << "\n";
    os << "estimator.interp_beta = " << format_double(cfg.trace.estimator.interp_beta) << "\n";
    os << "classifier.gamma = " << format_double(cfg.classifier.gamma) << "\n";
    os << "classifier.C = " << format_double(cfg.classifier.C) << "\n";
    os << "radio.carrier_hz = " << format_double(cfg.radio.carrier_hz) << "\n";
    os << "radio.bandwidth_hz = " << format_double(cfg.radio.bandwidth_hz) << "\n";
    os << "radio.n_subcarriers = " << cfg.radio.n_subcarriers << "\n";
    os << "radio.n_antennas = " << cfg.radio.n_antennas << "\n";
    os << "radio.packet_rate_hz = " << format_double(cfg.radio.packet_rate_hz) << "\n";
    os << "radio.c_mps = " << format_double(cfg.radio.c_mps) << "\n";
    os << "impair.pdd_s = " << format_double(cfg.impairments.pdd_s) << "\n";
    os << "impair.sfo_s_per_s = " << format_double(cfg.impairments.sfo_s_per_s) << "\n";
    os << "impair.cfo_cycles = " << format_double(cfg.impairments.cfo_cycles) << "\n";
    os << "impair.noise_power = " << format_double(cfg.impairments.noise_power) << "\n";
    if (!cfg.scenario_path.empty()) os << "scenario = " << cfg.scenario_path << "\n";
    os << "seed = " << cfg.seed << "\n";
    return os.str();
}

// Scenario text: radio.* / impair.* blocks plus indexed path.N.*,
// profile.N.piece.M = "duration v0 a", and event.N.* annotations.
inline ChannelScenario parse_scenario(const std::string& text, const RadioConfig& base_radio = {},
                                      const ImpairmentSpec& base_impair = {}) {
    KeyValues kv = KeyValues::parse(text);
    ChannelScenario sc;
    sc.radio = base_radio;
    sc.impairments = base_impair;
    configdetail::parse_radio(kv, "radio.", sc.radio);
    configdetail::parse_impairments(kv, "impair.", sc.impairments);
    sc.duration_s = kv.get_double("duration_s", sc.duration_s);
    sc.seed = kv.get_u64("seed", sc.seed);

    for (int i = 0;; ++i) {
        const std::string p = "path." + std::to_string(i) + ".";
        if (kv.keys_with_prefix(p).empty()) break;
        PathSpec ps;
        ps.kind = path_kind_from(kv.get_string(p + "kind", "direct"));
        ps.amplitude = cplx(kv.get_double(p + "amplitude_re", 1.0), kv.get_double(p + "amplitude_im", 0.0));
        ps.ref_gain = kv.get_double(p + "ref_gain", -1.0);
        ps.tof_s = kv.get_double(p + "tof_s", 0.0);
        ps.antenna_tof_step_s = kv.get_double(p + "antenna_tof_step_s", 1e-10);
        ps.profile = static_cast<int>(kv.get_long(p + "profile", -1));
        sc.paths.push_back(ps);
    }
    for (int i = 0;; ++i) {
        const std::string p = "profile." + std::to_string(i) + ".piece.";
        if (kv.keys_with_prefix(p).empty()) break;
        std::vector<KinPiece> pieces;
        for (int j = 0;; ++j) {
            const std::string key = p + std::to_string(j);
            if (!kv.has(key)) break;
            std::stringstream ss(kv.get_string(key, ""));
            KinPiece piece;
            if (!(ss >> piece.duration_s >> piece.v0_mps >> piece.a_mps2))
                throw DataError("scenario: '" + key + "' must be 'duration v0 a'");
            std::string rest;
            if (ss >> rest) throw DataError("scenario: '" + key + "' has trailing content");
            pieces.push_back(piece);
        }
        sc.profiles.emplace_back(std::move(pieces));
    }
    for (int i = 0;; ++i) {
        const std::string p = "event." + std::to_string(i) + ".";
        if (kv.keys_with_prefix(p).empty()) break;
        ScenarioEvent e;
        e.path = static_cast<int>(kv.get_long(p + "path", 0));
        e.start_s = kv.get_double(p + "start_s", 0.0);
        e.end_s = kv.get_double(p + "end_s", 0.0);
        e.label = kv.get_string(p + "label", "fall");
        sc.events.push_back(e);
    }
    kv.reject_unknown();
    sc.validate();
    return sc;
}

inline std::string format_scenario(const ChannelScenario& sc) {
    std::ostringstream os;
    os << "duration_s = " << format_double(sc.duration_s) << "\n";
    os << "seed = " << sc.seed << "\n";
    os << "radio.carrier_hz = " << format_double(sc.radio.carrier_hz) << "\n";
    os << "radio.bandwidth_hz = " << format_double(sc.radio.bandwidth_hz) << "\n";
    os << "radio.n_subcarriers = " << sc.radio.n_subcarriers << "\n";
    os << "radio.n_antennas = " << sc.radio.n_antennas << "\n";
    os << "radio.packet_rate_hz = " << format_double(sc.radio.packet_rate_hz) << "\n";
    os << "radio.c_mps = " << format_double(sc.radio.c_mps) << "\n";
    os << "impair.pdd_s = " << format_double(sc.impairments.pdd_s) << "\n";
    os << "impair.sfo_s_per_s = " << format_double(sc.impairments.sfo_s_per_s) << "\n";
    os << "impair.cfo_cycles = " << format_double(sc.impairments.cfo_cycles) << "\n";
    os << "impair.noise_power = " << format_double(sc.impairments.noise_power) << "\n";
    for (std::size_t i = 0; i < sc.paths.size(); ++i) {
        const PathSpec& p = sc.paths[i];
        const std::string pre = "path." + std::to_string(i) + ".";
        os << pre << "kind = " << to_string(p.kind) << "\n";
        os << pre << "amplitude_re = " << format_double(p.amplitude.real()) << "\n";
        os << pre << "amplitude_im = " << format_double(p.amplitude.imag()) << "\n";
        os << pre << "ref_gain = " << format_double(p.ref_gain) << "\n";
        os << pre << "tof_s = " << format_double(p.tof_s) << "\n";
        os << pre << "antenna_tof_step_s = " << format_double(p.antenna_tof_step_s) << "\n";
        if (p.profile >= 0) os << pre << "profile = " << p.profile << "\n";
    }
    for (std::size_t i = 0; i < sc.profiles.size(); ++i) {
        for (std::size_t j = 0; j < sc.profiles[i].pieces().size(); ++j) {
            const KinPiece& piece = sc.profiles[i].pieces()[j];
            os << "profile." << i << ".piece." << j << " = " << format_double(piece.duration_s) << ' '
               << format_double(piece.v0_mps) << ' ' << format_double(piece.a_mps2) << "\n";
        }
    }
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
        const ScenarioEvent& e = sc.events[i];
        const std::string pre = "event." + std::to_string(i) + ".";
        os << pre << "path = " << e.path << "\n";
        os << pre << "start_s = " << format_double(e.start_s) << "\n";
        os << pre << "end_s = " << format_double(e.end_s) << "\n";
        os << pre << "label = " << e.label << "\n";
    }
    return os.str();
}

}  // namespace dpace
