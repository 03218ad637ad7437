#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/fft.hpp"
#include "rffp/feature_vector.hpp"
#include "rffp/signal.hpp"

namespace rffp {

/// Two-level wavelet scattering transform: wavelet convolution, modulus,
/// low-pass averaging, cascaded once more along frequency-decreasing filter
/// pairs. Filters are Gabor bumps built directly in the frequency domain;
/// quality factors default to 8 for the first bank and 4 for the second.
struct WstConfig {
    std::size_t invariance_scale = 0; // averaging support in samples; 0 = signal length
    int q1 = 8;
    int q2 = 4;
    static constexpr int max_order = 2;
};

struct ScatteringPath {
    int order = 0;
    std::vector<int> filters;          // bank indices along the path, high frequency = 0
    std::vector<double> coefficients;  // low-pass averaged, downsampled output

    double energy() const {
        double e = 0.0;
        for (double c : coefficients) e += c * c;
        return e;
    }
};

struct ScatteringResult {
    std::vector<ScatteringPath> paths; // order, then lexicographic filter indices
    std::vector<double> bank1_freqs;   // center frequencies, cycles/sample
    std::vector<double> bank2_freqs;
};

namespace detail {

struct WstFilters {
    std::vector<double> lowpass;                 // |phi_hat| on N bins, symmetric
    std::vector<std::vector<double>> bank1;      // analytic bumps on N bins
    std::vector<std::vector<double>> bank2;
    std::vector<double> freqs1, freqs2;
    std::size_t stride = 1;
};

inline std::vector<double> gabor_bank_freqs(double xi_max, double xi_min, int q) {
    std::vector<double> freqs;
    const double step = std::pow(2.0, -1.0 / q);
    for (double xi = xi_max; xi > xi_min; xi *= step) freqs.push_back(xi);
    return freqs;
}

inline WstFilters build_wst_filters(std::size_t n, std::size_t t, int q1, int q2) {
    WstFilters fl;
    // Averaging std of half the invariance scale: content faster than 1/t is
    // attenuated below 1%, which is what makes shifts up to t/8 invisible.
    const double sigma_t = static_cast<double>(t) / 2.0;
    const double sigma_f = 1.0 / (2.0 * M_PI * sigma_t); // cycles/sample

    fl.lowpass.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = (k <= n / 2 ? static_cast<double>(k)
                                     : static_cast<double>(k) - static_cast<double>(n)) /
                         static_cast<double>(n);
        fl.lowpass[k] = std::exp(-0.5 * u * u / (sigma_f * sigma_f));
    }

    const double xi_max = 0.4;
    const double xi_min = std::max(4.0 * sigma_f, 2.0 / static_cast<double>(n));
    fl.freqs1 = gabor_bank_freqs(xi_max, xi_min, q1);
    fl.freqs2 = gabor_bank_freqs(xi_max, xi_min, q2);

    constexpr double fwhm_to_sigma = 2.354820045030949; // 2 sqrt(2 ln 2)
    auto make_bank = [&](const std::vector<double>& freqs, int q) {
        std::vector<std::vector<double>> bank;
        for (double xi : freqs) {
            const double sigma = xi / (static_cast<double>(q) * fwhm_to_sigma);
            std::vector<double> b(n, 0.0);
            for (std::size_t k = 0; k <= n / 2; ++k) {
                const double u = static_cast<double>(k) / static_cast<double>(n);
                const double d = (u - xi) / sigma;
                b[k] = std::exp(-0.5 * d * d);
            }
            bank.push_back(std::move(b));
        }
        return bank;
    };
    fl.bank1 = make_bank(fl.freqs1, q1);
    fl.bank2 = make_bank(fl.freqs2, q2);

    // Scale each bank so that phi^2 + sum psi^2 <= 1 on every bin, keeping
    // the low-pass at unit DC gain. This makes every stage a contraction.
    auto normalize_bank = [&](std::vector<std::vector<double>>& bank) {
        double gamma = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            double p = 0.0;
            for (const auto& b : bank) p += b[k] * b[k];
            const double headroom = std::max(1.0 - fl.lowpass[k] * fl.lowpass[k], 1e-9);
            gamma = std::max(gamma, p / headroom);
        }
        const double scale = 1.0 / std::sqrt(gamma);
        for (auto& b : bank)
            for (auto& v : b) v *= scale;
    };
    normalize_bank(fl.bank1);
    normalize_bank(fl.bank2);

    std::size_t stride = 1;
    while (stride * 2 <= t && stride * 2 <= n) stride *= 2;
    fl.stride = stride;
    return fl;
}

inline std::vector<double> subsample(const std::vector<double>& x, std::size_t stride) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.size(); i += stride) out.push_back(x[i]);
    return out;
}

inline std::vector<double> lowpass_average(const std::vector<cplx>& spectrum,
                                           const std::vector<double>& lowpass,
                                           std::size_t stride) {
    std::vector<cplx> prod(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) prod[k] = spectrum[k] * lowpass[k];
    const auto time = ifft(std::move(prod));
    std::vector<double> real_part(time.size());
    for (std::size_t i = 0; i < time.size(); ++i) real_part[i] = time[i].real();
    return subsample(real_part, stride);
}

} // namespace detail

inline ScatteringResult wst(const Signal& s, const WstConfig& cfg = {}) {
    check_signal(s, "wst");
    const std::size_t n = s.samples.size();
    if (n < 16) throw invalid_input("wst: need at least 16 samples");
    if (cfg.q2 < 1 || cfg.q1 < cfg.q2) throw invalid_input("wst: need q1 >= q2 >= 1");
    const std::size_t t = cfg.invariance_scale == 0 ? n : cfg.invariance_scale;
    if (4 * n < t) throw invalid_input("wst: signal shorter than invariance_scale / 4");

    const auto fl = detail::build_wst_filters(n, t, cfg.q1, cfg.q2);
    const auto spectrum = fft_real(s.samples);

    ScatteringResult res;
    res.bank1_freqs = fl.freqs1;
    res.bank2_freqs = fl.freqs2;

    ScatteringPath s0;
    s0.order = 0;
    s0.coefficients = detail::lowpass_average(spectrum, fl.lowpass, fl.stride);
    res.paths.push_back(std::move(s0));

    std::vector<cplx> band(n);
    for (std::size_t k1 = 0; k1 < fl.bank1.size(); ++k1) {
        for (std::size_t k = 0; k < n; ++k) band[k] = spectrum[k] * fl.bank1[k1][k];
        const auto y = ifft(band);
        std::vector<cplx> u1(n);
        for (std::size_t i = 0; i < n; ++i) u1[i] = cplx(std::abs(y[i]), 0.0);
        const auto u1_spec = fft(std::move(u1));

        ScatteringPath p1;
        p1.order = 1;
        p1.filters = {static_cast<int>(k1)};
        p1.coefficients = detail::lowpass_average(u1_spec, fl.lowpass, fl.stride);
        res.paths.push_back(std::move(p1));

        for (std::size_t k2 = 0; k2 < fl.bank2.size(); ++k2) {
            if (!(fl.freqs2[k2] < fl.freqs1[k1])) continue; // frequency-decreasing only
            for (std::size_t k = 0; k < n; ++k) band[k] = u1_spec[k] * fl.bank2[k2][k];
            const auto z = ifft(band);
            std::vector<cplx> u2(n);
            for (std::size_t i = 0; i < n; ++i) u2[i] = cplx(std::abs(z[i]), 0.0);
            const auto u2_spec = fft(std::move(u2));

            ScatteringPath p2;
            p2.order = 2;
            p2.filters = {static_cast<int>(k1), static_cast<int>(k2)};
            p2.coefficients = detail::lowpass_average(u2_spec, fl.lowpass, fl.stride);
            res.paths.push_back(std::move(p2));
        }
    }

    std::stable_sort(res.paths.begin(), res.paths.end(),
                     [](const ScatteringPath& a, const ScatteringPath& b) {
                         if (a.order != b.order) return a.order < b.order;
                         return a.filters < b.filters;
                     });
    return res;
}

/// One feature per path: the mean of that path's averaged coefficients, in
/// the deterministic path order.
inline FeatureVector wst_avg_features(const ScatteringResult& res) {
    if (res.paths.empty()) throw invalid_input("wst_avg_features: empty result");
    FeatureVector fv;
    fv.source = FeatureSource::WST_AVG;
    char name[48];
    for (const auto& p : res.paths) {
        double acc = 0.0;
        for (double c : p.coefficients) acc += c;
        if (p.order == 0)
            std::snprintf(name, sizeof(name), "wst_o0");
        else if (p.order == 1)
            std::snprintf(name, sizeof(name), "wst_o1_k%d", p.filters[0]);
        else
            std::snprintf(name, sizeof(name), "wst_o2_k%d_%d", p.filters[0], p.filters[1]);
        fv.names.emplace_back(name);
        fv.values.push_back(p.coefficients.empty() ? 0.0 : acc / static_cast<double>(p.coefficients.size()));
        fv.flags.push_back(false);
    }
    return fv;
}

} // namespace rffp
