#pragma once

// CSV interchange: '.' decimals, comma separators, LF line endings, header
// row, doubles at full round-trip precision.

#include <charconv>
#include <fstream>
#include <sstream>

#include "dpace/common.hpp"

namespace dpace {

inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw NumericalError("csv: unformattable value");
    return std::string(buf, p);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw DataError("csv: bad number '" + s + "'");
    return v;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : os_(path, std::ios::binary) {
        if (!os_) throw DataError("cannot open for writing: " + path);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << cells[i];
        }
        os_ << '\n';
    }

    void numeric_row(const std::vector<double>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ',';
            os_ << format_double(cells[i]);
        }
        os_ << '\n';
    }

    void close() { os_.close(); }

private:
    std::ofstream os_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; a schema error names the missing column.
    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw DataError("csv: missing column '" + name + "'");
    }

    double number(std::size_t row, std::size_t col) const { return parse_double(rows[row][col]); }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            t.header = cells;
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw DataError("csv: row with " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(t.header.size()) + " in " + path);
            t.rows.push_back(cells);
        }
    }
    if (first) throw DataError("csv: empty file " + path);
    return t;
}

}  // namespace dpace
