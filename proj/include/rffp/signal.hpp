#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/rng.hpp"

namespace rffp {

/// A finite real-valued sampled waveform plus provenance metadata. Immutable
/// by convention once built; every operation returns a fresh value.
struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = 1.0;
    std::vector<std::string> label_path; // hierarchy root to leaf, may be empty
    std::optional<double> snr_db;        // nominal SNR the signal was produced at
    std::optional<std::uint64_t> seed;   // generation seed, when synthetic

    std::size_t size() const { return samples.size(); }
};

inline void check_signal(const Signal& s, const char* who) {
    if (s.samples.empty()) throw invalid_input(std::string(who) + ": empty signal");
    if (!(s.sample_rate_hz > 0.0)) throw invalid_input(std::string(who) + ": sample rate must be positive");
    for (double v : s.samples)
        if (!std::isfinite(v)) throw invalid_input(std::string(who) + ": non-finite sample");
}

enum class SegmentKind { transient, steady };

/// Half-open index range [start_index, end_index) into a parent Signal.
struct BurstSegment {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    SegmentKind kind = SegmentKind::steady;

    std::size_t length() const { return end_index - start_index; }
};

/// Mean squared amplitude.
inline double signal_power(const Signal& s) {
    if (s.samples.empty()) throw invalid_input("signal_power: empty signal");
    double acc = 0.0;
    for (double v : s.samples) acc += v * v;
    return acc / static_cast<double>(s.samples.size());
}

/// Adds white Gaussian noise sized so that the mean signal power over the
/// whole input sits target_snr_db above the noise variance. Deterministic in
/// the seed.
inline Signal add_awgn(const Signal& s, double target_snr_db, std::uint64_t seed) {
    check_signal(s, "add_awgn");
    const double p = signal_power(s);
    if (!(p > 0.0)) throw invalid_input("add_awgn: zero-power signal, SNR undefined");
    const double noise_var = p / std::pow(10.0, target_snr_db / 10.0);
    const double sigma = std::sqrt(noise_var);
    Rng rng(seed);
    Signal out = s;
    for (double& v : out.samples) v += sigma * rng.gaussian();
    out.snr_db = target_snr_db;
    return out;
}

/// Linear map x -> (x - ref_min) / (ref_max - ref_min). Out-of-range values
/// are mapped linearly, never clamped.
inline Signal minmax_normalize(const Signal& s, double ref_min, double ref_max) {
    if (!(ref_max > ref_min)) throw invalid_input("minmax_normalize: ref_max must exceed ref_min");
    Signal out = s;
    const double inv = 1.0 / (ref_max - ref_min);
    for (double& v : out.samples) v = (v - ref_min) * inv;
    return out;
}

/// Inverse of minmax_normalize for the same reference extrema.
inline Signal minmax_denormalize(const Signal& s, double ref_min, double ref_max) {
    if (!(ref_max > ref_min)) throw invalid_input("minmax_denormalize: ref_max must exceed ref_min");
    Signal out = s;
    for (double& v : out.samples) v = v * (ref_max - ref_min) + ref_min;
    return out;
}

namespace detail {

/// RMS over windows [i, i+window) for i in [0, n-window]; if the signal is
/// shorter than the window a single full-span value is produced.
inline std::vector<double> windowed_rms(const std::vector<double>& x, std::size_t window) {
    const std::size_t n = x.size();
    const std::size_t w = std::min(window, n);
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
    std::vector<double> rms(n - w + 1);
    for (std::size_t i = 0; i + w <= n; ++i)
        rms[i] = std::sqrt((prefix[i + w] - prefix[i]) / static_cast<double>(w));
    return rms;
}

} // namespace detail

/// Burst selection by windowed-RMS thresholding. Maximal runs where the RMS
/// of a sliding window exceeds `threshold` become bursts; runs separated by
/// fewer than `min_gap` samples are merged. Each burst is split at the first
/// window position whose RMS reaches 90% of the burst's peak RMS: the ramp-up
/// before that point is the transient, the remainder the steady state. A
/// burst that opens at full power yields only a steady segment.
inline std::vector<BurstSegment> detect_bursts(const Signal& s, double threshold,
                                               std::size_t min_gap, std::size_t window = 64) {
    check_signal(s, "detect_bursts");
    if (!(threshold > 0.0)) throw invalid_input("detect_bursts: threshold must be positive");
    if (window == 0) throw invalid_input("detect_bursts: window must be positive");

    const std::size_t n = s.samples.size();
    const std::size_t w = std::min(window, n);
    const auto rms = detail::windowed_rms(s.samples, w);

    // Runs in window-start index space, then widened to sample space.
    struct Run { std::size_t lo, hi; }; // window-start indices, inclusive
    std::vector<Run> runs;
    for (std::size_t i = 0; i < rms.size(); ++i) {
        if (rms[i] > threshold) {
            if (!runs.empty() && i == runs.back().hi + 1)
                runs.back().hi = i;
            else if (!runs.empty() && i <= runs.back().hi + 1)
                runs.back().hi = std::max(runs.back().hi, i);
            else
                runs.push_back({i, i});
        }
    }
    if (runs.empty()) return {};

    std::vector<Run> merged;
    for (const auto& r : runs) {
        if (!merged.empty() && r.lo < merged.back().hi + w + min_gap)
            merged.back().hi = r.hi;
        else
            merged.push_back(r);
    }

    std::vector<BurstSegment> out;
    for (const auto& r : merged) {
        const std::size_t start = r.lo;
        const std::size_t end = std::min(n, r.hi + w); // last window covered
        double peak = 0.0;
        for (std::size_t i = r.lo; i <= r.hi; ++i) peak = std::max(peak, rms[i]);
        std::size_t split = r.lo;
        for (std::size_t i = r.lo; i <= r.hi; ++i) {
            if (rms[i] >= 0.9 * peak) { split = i; break; }
        }
        if (split > start)
            out.push_back({start, split, SegmentKind::transient});
        out.push_back({split, end, SegmentKind::steady});
    }
    return out;
}

/// Consecutive non-overlapping length-n slices of a steady segment; a
/// trailing remainder shorter than n is dropped.
inline std::vector<Signal> slice_steady(const Signal& s, const BurstSegment& seg, std::size_t n) {
    check_signal(s, "slice_steady");
    if (seg.kind != SegmentKind::steady) throw invalid_input("slice_steady: segment is not steady");
    if (n == 0) throw invalid_input("slice_steady: slice length must be positive");
    if (seg.start_index >= seg.end_index || seg.end_index > s.samples.size())
        throw invalid_input("slice_steady: segment out of range");

    std::vector<Signal> slices;
    for (std::size_t off = seg.start_index; off + n <= seg.end_index; off += n) {
        Signal part;
        part.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(off),
                            s.samples.begin() + static_cast<std::ptrdiff_t>(off + n));
        part.sample_rate_hz = s.sample_rate_hz;
        part.label_path = s.label_path;
        part.snr_db = s.snr_db;
        part.seed = s.seed;
        slices.push_back(std::move(part));
    }
    return slices;
}

} // namespace rffp
