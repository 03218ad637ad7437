#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/feature_vector.hpp"

namespace rffp {

/// Canonical order of the 13 summary statistics.
inline const std::array<const char*, 13>& stat_names() {
    static const std::array<const char*, 13> names = {
        "mean",      "harmonic_mean", "std",          "variance", "kurtosis",
        "rms",       "shape_factor",  "peak",         "peak_to_peak",
        "iqr",       "shannon_entropy", "summation",  "skewness"};
    return names;
}

namespace detail {

/// Type-7 quantile: linear interpolation between order statistics.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace detail

/// Thirteen summary statistics of a real series, in the frozen order of
/// stat_names(). Dispersion statistics follow the mixed normalizations of
/// the source table: std uses 1/(N-1), variance uses 1/N, kurtosis is the
/// non-excess fourth moment over (N-1) * std^4, and skewness completes the
/// moment family with (N-1) * std^3. Shannon entropy treats x_i^2 / sum(x^2)
/// as a distribution (natural log). Statistics whose formula breaks down
/// (zero mean, zero std, zero energy, harmonic mean over a non-positive
/// element, N = 1 for the N-1 forms) are returned as 0 with their flag set.
inline FeatureVector stat_summary(const std::vector<double>& x) {
    if (x.empty()) throw invalid_input("stat_summary: empty series");
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);

    FeatureVector fv;
    fv.source = FeatureSource::HHT26;
    fv.names.assign(stat_names().begin(), stat_names().end());
    fv.values.assign(13, 0.0);
    fv.flags.assign(13, false);
    auto set = [&](std::size_t i, double v) { fv.values[i] = v; };
    auto flag = [&](std::size_t i) { fv.values[i] = 0.0; fv.flags[i] = true; };

    double sum = 0.0, sum_sq = 0.0;
    double mn = x[0], mx = x[0];
    bool has_nonpositive = false;
    double inv_sum = 0.0;
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        if (v <= 0.0) has_nonpositive = true;
        else inv_sum += 1.0 / v;
    }
    const double mean = sum / dn;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }

    set(0, mean);

    if (has_nonpositive) flag(1);
    else set(1, dn / inv_sum);

    double sd = 0.0;
    if (n > 1) {
        sd = std::sqrt(m2 / (dn - 1.0));
        set(2, sd);
    } else {
        flag(2);
    }

    set(3, m2 / dn);

    if (n > 1 && sd > 0.0) set(4, m4 / ((dn - 1.0) * sd * sd * sd * sd));
    else flag(4);

    const double rms = std::sqrt(sum_sq / dn);
    set(5, rms);

    if (mean != 0.0) set(6, rms / mean);
    else flag(6);

    set(7, mx);
    set(8, mx - mn);

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    set(9, detail::quantile_sorted(sorted, 0.75) - detail::quantile_sorted(sorted, 0.25));

    if (sum_sq > 0.0) {
        double h = 0.0;
        for (double v : x) {
            const double p = v * v / sum_sq;
            if (p > 0.0) h -= p * std::log(p);
        }
        set(10, h);
    } else {
        flag(10);
    }

    set(11, sum);

    if (n > 1 && sd > 0.0) set(12, m3 / ((dn - 1.0) * sd * sd * sd));
    else flag(12);

    return fv;
}

} // namespace rffp
