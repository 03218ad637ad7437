#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/fft.hpp"
#include "rffp/feature_vector.hpp"
#include "rffp/signal.hpp"
#include "rffp/stats.hpp"

namespace rffp {

struct EmdConfig {
    int max_imfs = 8;
    double sift_sd_threshold = 0.2;
    int max_sift_iters = 100;
};

/// IMFs ordered highest-frequency first. The residual is exactly the input
/// minus the IMF sum, so reconstruction is exact by construction.
struct EmdResult {
    std::vector<std::vector<double>> imfs;
    std::vector<double> residual;
};

/// Per-sample amplitude, unwrapped phase and energy of one analytic signal.
struct AnalyticSeries {
    std::vector<double> amplitude;
    std::vector<double> phase;
    std::vector<double> energy; // amplitude squared
};

namespace detail {

/// Interior extrema via diff-sign changes; plateaus contribute their midpoint.
inline void find_extrema(const std::vector<double>& x,
                         std::vector<std::size_t>& maxima,
                         std::vector<std::size_t>& minima) {
    maxima.clear();
    minima.clear();
    int last_sign = 0;
    std::size_t last_idx = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double diff = x[i] - x[i - 1];
        const int s = (diff > 0.0) - (diff < 0.0);
        if (s == 0) continue;
        if (last_sign == 1 && s == -1) maxima.push_back((last_idx + i - 1) / 2);
        if (last_sign == -1 && s == 1) minima.push_back((last_idx + i - 1) / 2);
        last_sign = s;
        last_idx = i;
    }
}

inline std::size_t count_zero_crossings(const std::vector<double>& x) {
    std::size_t zc = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (double v : x) {
        if (v == 0.0) continue;
        if (have_prev && ((prev < 0.0) != (v < 0.0))) ++zc;
        prev = v;
        have_prev = true;
    }
    return zc;
}

inline bool imf_property_holds(const std::vector<double>& x) {
    std::vector<std::size_t> maxima, minima;
    find_extrema(x, maxima, minima);
    const auto extrema = maxima.size() + minima.size();
    const auto zc = count_zero_crossings(x);
    const auto diff = extrema > zc ? extrema - zc : zc - extrema;
    return diff <= 1;
}

/// Natural cubic spline through strictly increasing knots, evaluated at the
/// integer grid 0..len-1.
inline std::vector<double> natural_spline_eval(const std::vector<double>& t,
                                               const std::vector<double>& y,
                                               std::size_t len) {
    const std::size_t n = t.size();
    std::vector<double> out(len);
    if (n == 1) {
        std::fill(out.begin(), out.end(), y[0]);
        return out;
    }
    if (n == 2) {
        const double slope = (y[1] - y[0]) / (t[1] - t[0]);
        for (std::size_t i = 0; i < len; ++i)
            out[i] = y[0] + slope * (static_cast<double>(i) - t[0]);
        return out;
    }

    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t[i + 1] - t[i];

    // Tridiagonal solve for interior second derivatives, natural ends = 0.
    std::vector<double> m(n, 0.0), diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        upper[i] = h[i];
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double w = h[i - 1] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        if (i == 1) break;
    }

    std::size_t seg = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const double tt = static_cast<double>(i);
        while (seg + 2 < n && tt > t[seg + 1]) ++seg;
        const double a = (t[seg + 1] - tt) / h[seg];
        const double b = (tt - t[seg]) / h[seg];
        out[i] = a * y[seg] + b * y[seg + 1] +
                 ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * h[seg] * h[seg] / 6.0;
    }
    return out;
}

/// Spline envelope through the given extrema, with two extrema mirrored
/// about each end of the signal to tame boundary swings.
inline std::vector<double> envelope(const std::vector<double>& x,
                                    const std::vector<std::size_t>& ext) {
    const std::size_t n = x.size();
    const double last = static_cast<double>(n - 1);
    std::vector<std::pair<double, double>> knots;
    const std::size_t mirror = std::min<std::size_t>(2, ext.size());
    for (std::size_t k = 0; k < mirror; ++k)
        knots.emplace_back(-static_cast<double>(ext[k]), x[ext[k]]);
    for (auto i : ext) knots.emplace_back(static_cast<double>(i), x[i]);
    for (std::size_t k = 0; k < mirror; ++k) {
        const auto i = ext[ext.size() - 1 - k];
        knots.emplace_back(2.0 * last - static_cast<double>(i), x[i]);
    }
    std::sort(knots.begin(), knots.end());
    std::vector<double> t, y;
    for (const auto& [kt, kv] : knots) {
        if (!t.empty() && !(kt > t.back())) continue; // drop duplicate positions
        t.push_back(kt);
        y.push_back(kv);
    }
    return natural_spline_eval(t, y, n);
}

} // namespace detail

/// Empirical mode decomposition by sifting: cubic-spline envelopes on the
/// extrema (mirror-extended), subtract the envelope mean, iterate until the
/// Cauchy SD criterion drops below the threshold and the extrema/zero-crossing
/// property holds, then peel the IMF off and repeat on the remainder until it
/// is monotone, non-oscillatory, or max_imfs is reached. Degenerate inputs
/// produce zero IMFs with the input as residual.
inline EmdResult emd(const Signal& s, const EmdConfig& cfg = {}) {
    check_signal(s, "emd");
    if (s.samples.size() < 16) throw invalid_input("emd: need at least 16 samples");
    if (cfg.max_imfs < 2) throw invalid_input("emd: max_imfs must be >= 2");
    if (!(cfg.sift_sd_threshold > 0.0)) throw invalid_input("emd: sd threshold must be positive");
    if (cfg.max_sift_iters < 1) throw invalid_input("emd: max_sift_iters must be >= 1");

    EmdResult res;
    res.residual = s.samples;
    const std::size_t n = s.samples.size();
    std::vector<std::size_t> maxima, minima;

    for (int imf_idx = 0; imf_idx < cfg.max_imfs; ++imf_idx) {
        detail::find_extrema(res.residual, maxima, minima);
        if (maxima.size() < 2 || minima.size() < 2) break;

        std::vector<double> h = res.residual;
        for (int iter = 0; iter < cfg.max_sift_iters; ++iter) {
            detail::find_extrema(h, maxima, minima);
            if (maxima.size() < 2 || minima.size() < 2) break;
            const auto upper = detail::envelope(h, maxima);
            const auto lower = detail::envelope(h, minima);

            double num = 0.0, den = 0.0;
            std::vector<double> next(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double mean_env = 0.5 * (upper[i] + lower[i]);
                next[i] = h[i] - mean_env;
                num += mean_env * mean_env; // (h - next)^2
                den += h[i] * h[i];
            }
            h.swap(next);
            if (den == 0.0) break;
            if (num / den < cfg.sift_sd_threshold && detail::imf_property_holds(h)) break;
        }

        for (std::size_t i = 0; i < n; ++i) res.residual[i] -= h[i];
        res.imfs.push_back(std::move(h));

        detail::find_extrema(res.residual, maxima, minima);
        if (maxima.empty() && minima.empty()) break; // monotone remainder
    }
    return res;
}

/// Analytic signal via the frequency-domain method: zero the negative
/// frequencies, double the positive ones, keep DC and Nyquist. Returns the
/// instantaneous amplitude, unwrapped phase and energy.
inline AnalyticSeries hilbert_analytic(const std::vector<double>& imf) {
    if (imf.empty()) throw invalid_input("hilbert_analytic: empty input");
    const std::size_t n = imf.size();
    auto spec = fft_real(imf);
    const std::size_t half = n / 2;
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (std::size_t k = half + 1; k < n; ++k) spec[k] = cplx(0.0, 0.0);
    const auto z = ifft(std::move(spec));

    AnalyticSeries out;
    out.amplitude.resize(n);
    out.phase.resize(n);
    out.energy.resize(n);
    double prev_arg = 0.0, offset = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.amplitude[i] = std::abs(z[i]);
        out.energy[i] = out.amplitude[i] * out.amplitude[i];
        const double a = std::arg(z[i]);
        if (i == 0) {
            out.phase[0] = a;
        } else {
            double d = a - prev_arg;
            d -= 2.0 * M_PI * std::round(d / (2.0 * M_PI));
            offset += d;
            out.phase[i] = out.phase[0] + offset;
        }
        prev_arg = a;
    }
    return out;
}

/// 26 features: the 13 summary statistics of the instantaneous energy of the
/// first two IMFs. Missing IMFs are replaced by zero sequences and every
/// statistic of the substitute is flagged.
inline FeatureVector hht_features(const Signal& s, const EmdConfig& cfg = {}) {
    const auto dec = emd(s, cfg);
    const std::size_t n = s.samples.size();

    FeatureVector out;
    out.source = FeatureSource::HHT26;
    for (int which = 0; which < 2; ++which) {
        const bool have = dec.imfs.size() > static_cast<std::size_t>(which);
        FeatureVector st;
        if (have) {
            st = stat_summary(hilbert_analytic(dec.imfs[which]).energy);
        } else {
            st = stat_summary(std::vector<double>(n, 0.0));
            st.flags.assign(st.flags.size(), true); // substituted IMF
        }
        const std::string prefix = which == 0 ? "imf1_" : "imf2_";
        for (std::size_t i = 0; i < st.size(); ++i) {
            out.names.push_back(prefix + st.names[i]);
            out.values.push_back(st.values[i]);
            out.flags.push_back(st.flags[i]);
        }
    }
    return out;
}

} // namespace rffp
