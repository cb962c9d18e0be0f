#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpace {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Malformed inputs, bad files, violated preconditions. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Solver breakdowns and other numerical failures. CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline double energy(std::span<const cplx> x) {
    double e = 0.0;
    for (const cplx& v : x) e += std::norm(v);
    return e;
}

inline double energy(std::span<const double> x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace dpace
