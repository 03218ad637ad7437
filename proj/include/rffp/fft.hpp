#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "rffp/errors.hpp"

namespace rffp {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 Cooley-Tukey. Unnormalized; inverse only flips
/// the twiddle sign (caller divides by N).
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

/// Bluestein chirp-z for arbitrary N, via a power-of-2 circular convolution.
/// Chirp exponents are reduced mod 2N in exact integer arithmetic.
inline std::vector<cplx> fft_bluestein(const std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t e = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double ang = sign * M_PI * static_cast<double>(e) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<cplx> a(m, cplx(0.0, 0.0)), b(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<cplx> out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
    return out;
}

} // namespace detail

/// Forward DFT, unnormalized: X[k] = sum_t x[t] exp(-2*pi*i*k*t/N).
inline std::vector<cplx> fft(std::vector<cplx> x) {
    if (x.empty()) throw invalid_input("fft: empty input");
    if (detail::is_pow2(x.size())) {
        detail::fft_pow2(x, false);
        return x;
    }
    return detail::fft_bluestein(x, false);
}

/// Inverse DFT with 1/N normalization, so ifft(fft(x)) == x.
inline std::vector<cplx> ifft(std::vector<cplx> x) {
    if (x.empty()) throw invalid_input("ifft: empty input");
    const double scale = 1.0 / static_cast<double>(x.size());
    if (detail::is_pow2(x.size())) {
        detail::fft_pow2(x, true);
        for (auto& v : x) v *= scale;
        return x;
    }
    auto out = detail::fft_bluestein(x, true);
    for (auto& v : out) v *= scale;
    return out;
}

inline std::vector<cplx> fft_real(const std::vector<double>& x) {
    std::vector<cplx> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = cplx(x[i], 0.0);
    return fft(std::move(c));
}

} // namespace rffp
