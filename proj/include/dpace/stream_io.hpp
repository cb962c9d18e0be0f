#pragma once

// DPAC stream file: little-endian binary.
//   header: magic "DPAC", version u32, M u32, K u32,
//           packet_rate_hz f64, carrier_hz f64, bandwidth_hz f64
//   per packet: timestamp f64, then M*K complex values as (re f64, im f64)

#include <bit>
#include <cstring>
#include <fstream>

#include "dpace/csv.hpp"
#include "dpace/synth.hpp"

namespace dpace {

static_assert(std::endian::native == std::endian::little, "DPAC I/O assumes a little-endian host");

inline constexpr std::uint32_t kStreamVersion = 1;

namespace iodetail {

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is, const char* what, std::size_t offset) {
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw DataError(std::string("truncated stream: expected ") + what + " at byte offset " +
                        std::to_string(offset));
    return v;
}

}  // namespace iodetail

inline void write_stream(const std::string& path, const CsiStream& stream) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    os.write("DPAC", 4);
    iodetail::put<std::uint32_t>(os, kStreamVersion);
    iodetail::put<std::uint32_t>(os, static_cast<std::uint32_t>(stream.radio.n_antennas));
    iodetail::put<std::uint32_t>(os, static_cast<std::uint32_t>(stream.radio.n_subcarriers));
    iodetail::put<double>(os, stream.radio.packet_rate_hz);
    iodetail::put<double>(os, stream.radio.carrier_hz);
    iodetail::put<double>(os, stream.radio.bandwidth_hz);
    for (const CsiFrame& f : stream.frames) {
        iodetail::put<double>(os, f.timestamp_s);
        for (const cplx& v : f.h) {
            iodetail::put<double>(os, v.real());
            iodetail::put<double>(os, v.imag());
        }
    }
    if (!os) throw DataError("write failed: " + path);
}

inline CsiStream read_stream(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    char magic[4] = {};
    if (!is.read(magic, 4) || std::memcmp(magic, "DPAC", 4) != 0)
        throw DataError("not a DPAC stream: " + path);
    std::size_t off = 4;
    const auto version = iodetail::get<std::uint32_t>(is, "version", off);
    off += 4;
    if (version != kStreamVersion) throw DataError("unsupported DPAC version");
    CsiStream stream;
    stream.radio.n_antennas = static_cast<int>(iodetail::get<std::uint32_t>(is, "M", off));
    off += 4;
    stream.radio.n_subcarriers = static_cast<int>(iodetail::get<std::uint32_t>(is, "K", off));
    off += 4;
    stream.radio.packet_rate_hz = iodetail::get<double>(is, "packet_rate_hz", off);
    off += 8;
    stream.radio.carrier_hz = iodetail::get<double>(is, "carrier_hz", off);
    off += 8;
    stream.radio.bandwidth_hz = iodetail::get<double>(is, "bandwidth_hz", off);
    off += 8;
    stream.radio.validate();

    const std::size_t mk = static_cast<std::size_t>(stream.radio.n_antennas) *
                           static_cast<std::size_t>(stream.radio.n_subcarriers);
    for (;;) {
        double ts = 0.0;
        if (!is.read(reinterpret_cast<char*>(&ts), sizeof(double))) {
            if (is.gcount() == 0) break;  // clean end of stream
            throw DataError("truncated stream: partial timestamp at byte offset " + std::to_string(off));
        }
        off += 8;
        CsiFrame f;
        f.timestamp_s = ts;
        f.n_antennas = stream.radio.n_antennas;
        f.n_subcarriers = stream.radio.n_subcarriers;
        f.h.resize(mk);
        for (std::size_t i = 0; i < mk; ++i) {
            const double re = iodetail::get<double>(is, "sample", off);
            off += 8;
            const double im = iodetail::get<double>(is, "sample", off);
            off += 8;
            f.h[i] = cplx(re, im);
        }
        stream.frames.push_back(std::move(f));
    }
    return stream;
}

inline void write_ground_truth(const std::string& path, const GroundTruth& gt) {
    CsvWriter w(path);
    w.row({"packet_index", "path_id", "dplc_m", "v_mps", "a_mps2"});
    for (const GroundTruthRow& r : gt.rows)
        w.row({std::to_string(r.packet), std::to_string(r.path), format_double(r.dplc_m),
               format_double(r.v_mps), format_double(r.a_mps2)});
}

inline GroundTruth read_ground_truth(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cp = t.column("packet_index"), ci = t.column("path_id"), cd = t.column("dplc_m"),
                      cv = t.column("v_mps"), ca = t.column("a_mps2");
    GroundTruth gt;
    gt.rows.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        GroundTruthRow row;
        row.packet = static_cast<std::size_t>(t.number(r, cp));
        row.path = static_cast<int>(t.number(r, ci));
        row.dplc_m = t.number(r, cd);
        row.v_mps = t.number(r, cv);
        row.a_mps2 = t.number(r, ca);
        gt.rows.push_back(row);
    }
    return gt;
}

// Labeled event intervals (e.g. falls) as CSV.
inline void write_events(const std::string& path, const std::vector<ScenarioEvent>& events) {
    CsvWriter w(path);
    w.row({"path_id", "start_s", "end_s", "label"});
    for (const ScenarioEvent& e : events)
        w.row({std::to_string(e.path), format_double(e.start_s), format_double(e.end_s), e.label});
}

inline std::vector<ScenarioEvent> read_events(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cp = t.column("path_id"), cs = t.column("start_s"), ce = t.column("end_s"),
                      cl = t.column("label");
    std::vector<ScenarioEvent> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        out.push_back({static_cast<int>(t.number(r, cp)), t.number(r, cs), t.number(r, ce), t.rows[r][cl]});
    return out;
}

}  // namespace dpace
