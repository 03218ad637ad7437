#pragma once

#include <cmath>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/signal.hpp"

namespace rffp {

/// Single-level orthonormal Haar split. `odd_tail_dropped` flags that the
/// input had odd length and its final sample was not transformed.
struct HaarDecomposition {
    std::vector<double> approx;
    std::vector<double> detail;
    bool odd_tail_dropped = false;
};

/// Four sub-band packets of the two-level Haar wavelet packet tree.
struct WptPackets {
    std::vector<double> aa; // approx of approx
    std::vector<double> ad; // detail of approx
    std::vector<double> da; // approx of detail
    std::vector<double> dd; // detail of detail
};

namespace detail {

inline HaarDecomposition haar_pairs(const std::vector<double>& x) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    HaarDecomposition dec;
    const std::size_t pairs = x.size() / 2;
    dec.odd_tail_dropped = (x.size() % 2) != 0;
    dec.approx.resize(pairs);
    dec.detail.resize(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        dec.approx[i] = (x[2 * i] + x[2 * i + 1]) * inv_sqrt2;
        dec.detail[i] = (x[2 * i] - x[2 * i + 1]) * inv_sqrt2;
    }
    return dec;
}

} // namespace detail

/// approx[i] = (x[2i] + x[2i+1]) / sqrt(2), detail[i] = (x[2i] - x[2i+1]) / sqrt(2).
/// Orthonormal filters, so packet energies sum to the input energy. An odd
/// trailing sample is dropped and flagged.
inline HaarDecomposition haar_dwt(const Signal& s) {
    check_signal(s, "haar_dwt");
    if (s.samples.size() < 2) throw invalid_input("haar_dwt: need at least 2 samples");
    return detail::haar_pairs(s.samples);
}

/// Perfect reconstruction of the even-length input.
inline Signal haar_idwt(const HaarDecomposition& dec) {
    if (dec.approx.size() != dec.detail.size())
        throw invalid_input("haar_idwt: approx/detail length mismatch");
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    Signal out;
    out.samples.resize(dec.approx.size() * 2);
    for (std::size_t i = 0; i < dec.approx.size(); ++i) {
        out.samples[2 * i] = (dec.approx[i] + dec.detail[i]) * inv_sqrt2;
        out.samples[2 * i + 1] = (dec.approx[i] - dec.detail[i]) * inv_sqrt2;
    }
    return out;
}

/// Two-level wavelet packet transform: Haar split, then Haar split of both
/// the approximation and the detail branch.
inline WptPackets wpt_two_level(const Signal& s) {
    check_signal(s, "wpt_two_level");
    if (s.samples.size() < 4) throw invalid_input("wpt_two_level: need at least 4 samples");
    const auto level1 = detail::haar_pairs(s.samples);
    const auto a2 = detail::haar_pairs(level1.approx);
    const auto d2 = detail::haar_pairs(level1.detail);
    return WptPackets{a2.approx, a2.detail, d2.approx, d2.detail};
}

} // namespace rffp
