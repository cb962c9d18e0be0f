#pragma once

// Complex FFT used for the V-A plane transform. Power-of-two lengths run an
// iterative radix-2 kernel; any other length falls back to Bluestein's
// algorithm on top of it, so arbitrary padding configurations stay usable.

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "dpace/common.hpp"

namespace dpace {
namespace fftdetail {

struct Twiddles {
    cvec fwd;  // exp(-j*2*pi*k/n), n/2 entries
    explicit Twiddles(std::size_t n) : fwd(n / 2) {
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            fwd[k] = cplx(std::cos(ang), std::sin(ang));
        }
    }
};

inline const Twiddles& twiddles_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Twiddles>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<Twiddles>(n)).first;
    return *it->second;
}

// In-place radix-2, dir = -1 forward kernel exp(-j...), dir = +1 conjugate kernel.
inline void fft_pow2(cplx* x, std::size_t n, int dir) {
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const Twiddles& tw = twiddles_for(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = tw.fwd[k * step];
                if (dir > 0) w = std::conj(w);
                cplx u = x[i + k];
                cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
            }
        }
    }
}

struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t m = 0;   // convolution length, power of two
    cvec chirp;          // exp(-j*pi*k^2/n)
    cvec bfft;           // FFT of conjugate chirp, padded and wrapped
    explicit BluesteinPlan(std::size_t n_) : n(n_) {
        m = next_pow2(2 * n - 1);
        chirp.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the angle argument small for large n
            std::size_t k2 = (k * k) % (2 * n);
            double ang = -kPi * static_cast<double>(k2) / static_cast<double>(n);
            chirp[k] = cplx(std::cos(ang), std::sin(ang));
        }
        cvec b(m, cplx(0.0, 0.0));
        b[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            b[k] = std::conj(chirp[k]);
            b[m - k] = std::conj(chirp[k]);
        }
        fft_pow2(b.data(), m, -1);
        bfft = std::move(b);
    }
};

inline const BluesteinPlan& bluestein_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<BluesteinPlan>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<BluesteinPlan>(n)).first;
    return *it->second;
}

inline void fft_bluestein(cplx* x, std::size_t n, int dir) {
    const BluesteinPlan& plan = bluestein_for(n);
    cvec a(plan.m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx c = (dir < 0) ? plan.chirp[k] : std::conj(plan.chirp[k]);
        a[k] = x[k] * c;
    }
    fft_pow2(a.data(), plan.m, -1);
    if (dir < 0) {
        for (std::size_t k = 0; k < plan.m; ++k) a[k] *= plan.bfft[k];
    } else {
        for (std::size_t k = 0; k < plan.m; ++k) a[k] *= std::conj(plan.bfft[k]);
    }
    fft_pow2(a.data(), plan.m, 1);
    double inv = 1.0 / static_cast<double>(plan.m);
    for (std::size_t k = 0; k < n; ++k) {
        cplx c = (dir < 0) ? plan.chirp[k] : std::conj(plan.chirp[k]);
        x[k] = a[k] * c * inv;
    }
}

}  // namespace fftdetail

// Unnormalized DFT: X[p] = sum_n x[n] exp(dir * j*2*pi*p*n/N), dir in {-1,+1}.
inline void fft_inplace(cplx* x, std::size_t n, int dir) {
    if (n == 0) return;
    if ((n & (n - 1)) == 0) {
        fftdetail::fft_pow2(x, n, dir);
    } else {
        fftdetail::fft_bluestein(x, n, dir);
    }
}

inline void fft_inplace(cvec& x, int dir) { fft_inplace(x.data(), x.size(), dir); }

// Row-major [rows x cols] 2D transform with zero padding.
inline cvec fft2(std::span<const cplx> src, std::size_t rows, std::size_t cols,
                 std::size_t pad_rows, std::size_t pad_cols, int dir) {
    if (src.size() != rows * cols) throw DataError("fft2: shape mismatch");
    if (pad_rows < rows || pad_cols < cols) throw DataError("fft2: pad smaller than data");
    cvec out(pad_rows * pad_cols, cplx(0.0, 0.0));
    for (std::size_t r = 0; r < rows; ++r)
        std::copy_n(src.data() + r * cols, cols, out.data() + r * pad_cols);
    for (std::size_t r = 0; r < rows; ++r) fft_inplace(out.data() + r * pad_cols, pad_cols, dir);
    cvec col(pad_rows);
    for (std::size_t c = 0; c < pad_cols; ++c) {
        for (std::size_t r = 0; r < pad_rows; ++r) col[r] = out[r * pad_cols + c];
        fft_inplace(col.data(), pad_rows, dir);
        for (std::size_t r = 0; r < pad_rows; ++r) out[r * pad_cols + c] = col[r];
    }
    return out;
}

}  // namespace dpace
