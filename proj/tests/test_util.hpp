#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "rffp/rng.hpp"
#include "rffp/signal.hpp"

namespace testutil {

inline rffp::Signal make_signal(std::vector<double> samples, double rate = 1.0) {
    rffp::Signal s;
    s.samples = std::move(samples);
    s.sample_rate_hz = rate;
    return s;
}

inline rffp::Signal random_signal(std::size_t n, std::uint64_t seed, double amp = 1.0) {
    rffp::Rng rng(seed);
    rffp::Signal s;
    s.samples.resize(n);
    for (auto& v : s.samples) v = amp * rng.gaussian();
    return s;
}

inline rffp::Signal sinusoid(std::size_t n, double freq, double amp = 1.0, double phase = 0.0) {
    rffp::Signal s;
    s.samples.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        s.samples[t] = amp * std::sin(2.0 * M_PI * freq * static_cast<double>(t) + phase);
    return s;
}

inline double energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// O(n^2) reference DFT used as the FFT oracle.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                               static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace testutil
