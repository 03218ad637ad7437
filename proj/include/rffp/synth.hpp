#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/rng.hpp"
#include "rffp/signal.hpp"

namespace rffp {

/// Default AM rate: four modulation cycles per 1024-sample slice.
inline constexpr double kSynthAmFreq = 1.0 / 256.0;

/// Gain applied to the non-dominant carriers of a dwell, before jitter.
inline constexpr double kSynthBackgroundGain = 0.35;

/// Synthetic device fingerprint: a power-on ramp followed by a steady state
/// that sums the spec's carrier tones, with one carrier dominant per hop
/// dwell and optional amplitude modulation. Carrier phases and the AM rate
/// are fixed properties of the device; per-transmission randomness enters
/// through the link gain, the hop sequence, the AM phase and the background
/// carriers' gain jitter.
struct DeviceSpec {
    std::vector<std::string> class_path;  // hierarchy root to leaf
    std::vector<double> carrier_bins;     // normalized frequencies, each in (0, 0.5)
    std::size_t hop_period = 8192;        // samples per frequency-hop dwell
    std::size_t transient_len = 256;      // power-on ramp length in samples
    double steady_amp = 1.0;              // steady-state amplitude
    double am_depth = 0.0;                // amplitude-modulation depth in [0, 1]
    double am_rate = kSynthAmFreq;        // modulation cycles per sample
};

inline void check_device_spec(const DeviceSpec& spec) {
    if (spec.carrier_bins.empty()) throw invalid_input("DeviceSpec: no carrier bins");
    for (double f : spec.carrier_bins)
        if (!(f > 0.0) || !(f < 0.5))
            throw invalid_input("DeviceSpec: carrier bin outside (0, 0.5)");
    if (spec.hop_period < 1) throw invalid_input("DeviceSpec: hop_period must be >= 1");
    if (spec.transient_len < 1) throw invalid_input("DeviceSpec: transient_len must be >= 1");
    if (!(spec.steady_amp > 0.0)) throw invalid_input("DeviceSpec: steady_amp must be positive");
    if (spec.am_depth < 0.0 || spec.am_depth > 1.0)
        throw invalid_input("DeviceSpec: am_depth outside [0, 1]");
    if (!(spec.am_rate > 0.0) || !(spec.am_rate < 0.5))
        throw invalid_input("DeviceSpec: am_rate outside (0, 0.5)");
}

namespace detail {

inline std::uint64_t hash_strings(std::uint64_t seed, const std::vector<std::string>& parts) {
    std::uint64_t h = splitmix64(seed ^ 0x8C9F3AFA785D1E2DULL);
    for (const auto& s : parts) {
        for (unsigned char c : s) h = splitmix64(h ^ c);
        h = splitmix64(h ^ 0x2545F4914F6CDD1DULL);
    }
    return h;
}

/// Device-identity hash: class path plus the carrier layout.
inline std::uint64_t device_hash(const DeviceSpec& spec) {
    std::uint64_t h = hash_strings(0x5851F42D4C957F2DULL, spec.class_path);
    for (double f : spec.carrier_bins) {
        const auto bits = std::bit_cast<std::uint64_t>(f);
        h = splitmix64(h ^ bits);
    }
    return h;
}

} // namespace detail

/// Emits `length` samples: a linear amplitude ramp over the transient, then
/// the steady state. All carriers sound at once; each dwell of hop_period
/// samples promotes one seeded choice of carrier to full gain while the rest
/// stay near the background gain. Deterministic in (spec, length, seed).
inline Signal synth_generate(const DeviceSpec& spec, std::size_t length, std::uint64_t seed) {
    check_device_spec(spec);
    if (length < spec.transient_len)
        throw invalid_input("synth_generate: length shorter than the transient ramp");

    const std::size_t nc = spec.carrier_bins.size();

    // Carrier phases belong to the device, not the transmission.
    Rng device_rng(detail::device_hash(spec));
    std::vector<double> phase(nc);
    for (auto& p : phase) p = 2.0 * M_PI * device_rng.uniform01();

    Rng rng(seed);
    const double gain = 0.8 + 0.4 * rng.uniform01(); // whole-transmission link gain
    const double am_phase = 2.0 * M_PI * rng.uniform01();
    std::vector<double> bg(nc);
    for (auto& b : bg) b = kSynthBackgroundGain * (0.7 + 0.6 * rng.uniform01());
    const std::size_t dwells = (length + spec.hop_period - 1) / spec.hop_period;
    std::vector<std::size_t> hop(dwells);
    for (auto& h : hop) h = static_cast<std::size_t>(rng.uniform_int(nc));

    Signal out;
    out.samples.resize(length);
    out.label_path = spec.class_path;
    out.seed = seed;
    for (std::size_t t = 0; t < length; ++t) {
        const std::size_t dominant = hop[t / spec.hop_period];
        double v = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            const double g = j == dominant ? 1.0 : bg[j];
            v += g * std::sin(2.0 * M_PI * spec.carrier_bins[j] * static_cast<double>(t) + phase[j]);
        }
        v *= gain * (1.0 + spec.am_depth *
                               std::sin(2.0 * M_PI * spec.am_rate * static_cast<double>(t) + am_phase));
        double env = spec.steady_amp;
        if (t < spec.transient_len)
            env *= static_cast<double>(t + 1) / static_cast<double>(spec.transient_len);
        out.samples[t] = env * v;
    }
    return out;
}

/// Derives one DeviceSpec per leaf from a set of root-to-leaf label paths.
/// Interior levels partition the usable band recursively, so branches that
/// split high in the hierarchy occupy disjoint sub-bands and stay separable
/// under noise. Sibling leaves under an interior parent share that parent's
/// carrier layout and differ only in AM depth, hop period and small carrier
/// offsets, making the deepest distinctions the first to wash out as SNR
/// drops. Leaves hanging directly off the root get independent layouts.
inline std::vector<DeviceSpec> derive_device_specs(const std::vector<std::vector<std::string>>& leaf_paths,
                                                   std::uint64_t seed,
                                                   double band_lo = 0.05, double band_hi = 0.45) {
    if (!(band_hi > band_lo) || !(band_lo > 0.0) || !(band_hi < 0.5))
        throw invalid_input("derive_device_specs: band must sit strictly inside (0, 0.5)");

    auto children_of = [&](const std::vector<std::string>& prefix) {
        std::set<std::string> kids;
        for (const auto& path : leaf_paths) {
            if (path.size() <= prefix.size()) continue;
            if (!std::equal(prefix.begin(), prefix.end(), path.begin())) continue;
            kids.insert(path[prefix.size()]);
        }
        return std::vector<std::string>(kids.begin(), kids.end());
    };

    std::vector<DeviceSpec> specs;
    for (const auto& path : leaf_paths) {
        if (path.size() < 2) throw invalid_input("derive_device_specs: path must descend below the root");

        double lo = band_lo, hi = band_hi;
        for (std::size_t level = 1; level + 1 < path.size(); ++level) {
            std::vector<std::string> prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(level));
            const auto sibs = children_of(prefix);
            const auto it = std::find(sibs.begin(), sibs.end(), path[level]);
            const auto idx = static_cast<std::size_t>(it - sibs.begin());
            const double width = (hi - lo) / static_cast<double>(sibs.size());
            lo = lo + width * static_cast<double>(idx);
            hi = lo + width;
        }

        std::vector<std::string> parent(path.begin(), path.end() - 1);
        const auto leaves = children_of(parent);
        const auto leaf_it = std::find(leaves.begin(), leaves.end(), path.back());
        const std::size_t leaf_idx = static_cast<std::size_t>(leaf_it - leaves.begin());
        const std::size_t nsib = leaves.size();

        // Root-level leaves hash on the full path (independent layouts);
        // deeper leaves hash on the parent (shared layout across siblings).
        Rng rng(detail::hash_strings(seed, path.size() == 2 ? path : parent));
        const double width = hi - lo;
        DeviceSpec spec;
        spec.class_path = path;
        // Stratified placement: one carrier per band third keeps adjacent
        // carriers apart, so their beat stays faster than the RMS window.
        // Carriers snap to the 1/1024 grid so that 1024-sample slices cut on
        // that grid all see the device's own carrier phases.
        for (int j = 0; j < 3; ++j) {
            const double stratum = (static_cast<double>(j) + 0.15 + 0.7 * rng.uniform01()) / 3.0;
            const double jitter =
                width * 0.015 * (static_cast<double>(leaf_idx) - 0.5 * static_cast<double>(nsib - 1));
            const double f = std::clamp(lo + width * stratum + jitter, 0.01, 0.49);
            spec.carrier_bins.push_back(std::round(f * 1024.0) / 1024.0);
        }
        std::sort(spec.carrier_bins.begin(), spec.carrier_bins.end());
        spec.hop_period = 8192;
        spec.am_depth = nsib > 1
                            ? 0.2 + 0.3 * static_cast<double>(leaf_idx) / static_cast<double>(nsib - 1)
                            : 0.35;
        spec.am_rate = 1.0 / (128.0 + 256.0 * rng.uniform01());
        spec.transient_len = 256;
        spec.steady_amp = 1.0;
        specs.push_back(std::move(spec));
    }
    return specs;
}

} // namespace rffp
