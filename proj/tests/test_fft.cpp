#include <catch2/catch_amalgamated.hpp>

#include "dpace/fft.hpp"
#include "dpace/rng.hpp"

using namespace dpace;

namespace {

// Direct O(n^2) DFT, the oracle for the fast path.
cvec dft_direct(const cvec& x, int dir) {
    const std::size_t n = x.size();
    cvec out(n);
    for (std::size_t p = 0; p < n; ++p) {
        cplx acc(0.0, 0.0);
        for (std::size_t q = 0; q < n; ++q) {
            const double ang = dir * kTwoPi * static_cast<double>(p) * static_cast<double>(q) / static_cast<double>(n);
            acc += x[q] * cplx(std::cos(ang), std::sin(ang));
        }
        out[p] = acc;
    }
    return out;
}

cvec random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    cvec x(n);
    for (cplx& v : x) v = cplx(rng.normal(), rng.normal());
    return x;
}

}  // namespace

TEST_CASE("fft matches direct DFT for power-of-two and general lengths") {
    for (std::size_t n : {2u, 8u, 64u, 120u, 240u, 480u, 97u}) {
        for (int dir : {-1, +1}) {
            cvec x = random_signal(n, 1000 + n + static_cast<std::size_t>(dir + 1));
            cvec want = dft_direct(x, dir);
            cvec got = x;
            fft_inplace(got, dir);
            double max_err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                max_err = std::max(max_err, std::abs(got[i] - want[i]));
                scale = std::max(scale, std::abs(want[i]));
            }
            INFO("n=" << n << " dir=" << dir);
            CHECK(max_err <= 1e-10 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("fft2 zero-pads and satisfies Parseval") {
    const std::size_t rows = 12, cols = 20, pr = 64, pc = 128;
    cvec x = random_signal(rows * cols, 7);
    cvec g = fft2(x, rows, cols, pr, pc, +1);
    REQUIRE(g.size() == pr * pc);
    const double e_time = energy(std::span<const cplx>(x));
    const double e_freq = energy(std::span<const cplx>(g)) / static_cast<double>(pr * pc);
    CHECK(e_freq == Catch::Approx(e_time).epsilon(1e-12));
}

TEST_CASE("fft2 of a 2D tone peaks at the tone bin") {
    const std::size_t rows = 16, cols = 32;
    const double fr = 3.0 / rows, fc = 5.0 / cols;
    cvec x(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double ang = -kTwoPi * (fr * static_cast<double>(r) + fc * static_cast<double>(c));
            x[r * cols + c] = cplx(std::cos(ang), std::sin(ang));
        }
    cvec g = fft2(x, rows, cols, rows, cols, +1);  // conjugate kernel: peak at +f
    std::size_t arg = 0;
    for (std::size_t i = 1; i < g.size(); ++i)
        if (std::abs(g[i]) > std::abs(g[arg])) arg = i;
    CHECK(arg / cols == 3);
    CHECK(arg % cols == 5);
}
