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

/// Continuous wavelet transform over a geometric scale grid. The wavelet is
/// the analytic Morlet with omega0 = 5 rad/sample at unit scale, i.e. the
/// frequency response exp(-(s*w - 5)^2 / 2) on positive frequencies only, so
/// a scale s is centered at center_frequency / s cycles per sample.
struct CwtConfig {
    int voices_per_octave = 12;
    int num_scales = 114;
    double center_frequency = 5.0 / (2.0 * M_PI); // cycles/sample at unit scale
    double max_frequency = 0.45;                  // finest-scale center frequency
};

struct Scalogram {
    std::vector<std::vector<cplx>> coefficients;   // [scale][time]
    std::vector<std::vector<double>> energy;       // squared modulus, same shape
    std::vector<double> scales;                    // ascending, fine to coarse

    std::size_t num_scales() const { return scales.size(); }
    std::size_t num_samples() const { return coefficients.empty() ? 0 : coefficients.front().size(); }
};

inline std::vector<double> cwt_scale_grid(const CwtConfig& cfg) {
    if (cfg.num_scales < 1) throw invalid_input("cwt: num_scales must be >= 1");
    if (cfg.voices_per_octave < 1) throw invalid_input("cwt: voices_per_octave must be >= 1");
    const double s_min = cfg.center_frequency / cfg.max_frequency;
    std::vector<double> scales(static_cast<std::size_t>(cfg.num_scales));
    for (std::size_t j = 0; j < scales.size(); ++j)
        scales[j] = s_min * std::pow(2.0, static_cast<double>(j) / cfg.voices_per_octave);
    return scales;
}

/// Frequency-domain (circular) convolution with the scaled analytic Morlet.
/// Coefficients carry the 1/sqrt(s) time-domain normalization, which turns
/// into a sqrt(s) factor on the frequency response.
inline Scalogram cwt(const Signal& s, const CwtConfig& cfg = {}) {
    check_signal(s, "cwt");
    const std::size_t n = s.samples.size();
    if (n < 16) throw invalid_input("cwt: need at least 16 samples");

    constexpr double omega0 = 5.0; // rad/sample at unit scale
    const auto spectrum = fft_real(s.samples);

    Scalogram out;
    out.scales = cwt_scale_grid(cfg);
    out.coefficients.reserve(out.scales.size());
    out.energy.reserve(out.scales.size());

    std::vector<cplx> band(n);
    for (double scale : out.scales) {
        const double root_s = std::sqrt(scale);
        for (std::size_t k = 0; k < n; ++k) {
            if (k > n / 2) {
                band[k] = cplx(0.0, 0.0); // analytic: negative frequencies vanish
                continue;
            }
            const double w = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
            const double g = scale * w - omega0;
            band[k] = spectrum[k] * (root_s * std::exp(-0.5 * g * g));
        }
        auto row = ifft(band);
        std::vector<double> erow(n);
        for (std::size_t t = 0; t < n; ++t) erow[t] = std::norm(row[t]);
        out.coefficients.push_back(std::move(row));
        out.energy.push_back(std::move(erow));
    }
    return out;
}

/// E(s, tau) = |w(s, tau)|^2, recomputed from the coefficients.
inline std::vector<std::vector<double>> scalogram_energy(const Scalogram& scal) {
    std::vector<std::vector<double>> e(scal.coefficients.size());
    for (std::size_t i = 0; i < scal.coefficients.size(); ++i) {
        e[i].resize(scal.coefficients[i].size());
        for (std::size_t t = 0; t < scal.coefficients[i].size(); ++t)
            e[i][t] = std::norm(scal.coefficients[i][t]);
    }
    return e;
}

/// One feature per scale: the time average of the coefficients' real part.
inline FeatureVector cwt_avg_features(const Scalogram& scal) {
    if (scal.coefficients.empty()) throw invalid_input("cwt_avg_features: empty scalogram");
    FeatureVector fv;
    fv.source = FeatureSource::CWT_AVG;
    char name[32];
    for (std::size_t i = 0; i < scal.coefficients.size(); ++i) {
        double acc = 0.0;
        for (const auto& c : scal.coefficients[i]) acc += c.real();
        std::snprintf(name, sizeof(name), "cwt_s%03zu", i);
        fv.names.emplace_back(name);
        fv.values.push_back(acc / static_cast<double>(scal.coefficients[i].size()));
        fv.flags.push_back(false);
    }
    return fv;
}

/// Writes the energy matrix as a binary PGM (P5, maxval 255, no comments).
/// Rows are scales with the coarsest at the bottom, columns are time. Pixels
/// are log1p-compressed, then min-max scaled per image; a flat image comes
/// out all zero.
inline void render_scalogram(const Scalogram& scal, const std::string& path) {
    if (scal.energy.empty() || scal.energy.front().empty())
        throw invalid_input("render_scalogram: empty scalogram");
    const std::size_t h = scal.energy.size();
    const std::size_t w = scal.energy.front().size();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& row : scal.energy)
        for (double e : row) {
            const double v = std::log1p(e);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi - lo;

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw io_error("render_scalogram: cannot open " + path);
    std::fprintf(f, "P5\n%zu %zu\n255\n", w, h);
    std::vector<unsigned char> row_bytes(w);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const double v = std::log1p(scal.energy[r][c]);
            const double u = span > 0.0 ? (v - lo) / span : 0.0;
            row_bytes[c] = static_cast<unsigned char>(std::lround(u * 255.0));
        }
        if (std::fwrite(row_bytes.data(), 1, w, f) != w) {
            std::fclose(f);
            throw io_error("render_scalogram: short write to " + path);
        }
    }
    if (std::fclose(f) != 0) throw io_error("render_scalogram: close failed for " + path);
}

} // namespace rffp
