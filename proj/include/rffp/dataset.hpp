#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rffp/errors.hpp"
#include "rffp/feature_vector.hpp"
#include "rffp/rng.hpp"
#include "rffp/signal.hpp"
#include "rffp/synth.hpp"

namespace rffp {

// ---- signal files ----
// Header, all little-endian: magic "RFS1", u32 version, u64 sample count,
// f64 sample rate, then the samples as 32-bit reals.

inline constexpr char kSignalMagic[4] = {'R', 'F', 'S', '1'};
inline constexpr std::uint32_t kSignalVersion = 1;

inline void write_signal(const Signal& s, const std::string& path) {
    check_signal(s, "write_signal");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_signal: cannot open " + path);
    out.write(kSignalMagic, 4);
    const std::uint32_t version = kSignalVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::uint64_t count = s.samples.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    out.write(reinterpret_cast<const char*>(&s.sample_rate_hz), sizeof(double));
    for (double v : s.samples) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    }
    if (!out) throw io_error("write_signal: short write to " + path);
}

inline Signal read_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_signal: cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kSignalMagic, 4) != 0)
        throw format_error("read_signal: bad magic in " + path);
    std::uint32_t version = 0;
    if (!in.read(reinterpret_cast<char*>(&version), sizeof(version)) || version != kSignalVersion)
        throw format_error("read_signal: unsupported version in " + path);
    std::uint64_t count = 0;
    if (!in.read(reinterpret_cast<char*>(&count), sizeof(count)))
        throw format_error("read_signal: truncated sample count in " + path);
    if (count == 0) throw format_error("read_signal: zero sample count in " + path);
    Signal s;
    if (!in.read(reinterpret_cast<char*>(&s.sample_rate_hz), sizeof(double)))
        throw format_error("read_signal: truncated sample rate in " + path);
    s.samples.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        float f = 0.0f;
        if (!in.read(reinterpret_cast<char*>(&f), sizeof(f)))
            throw format_error("read_signal: truncated payload in " + path);
        s.samples[i] = static_cast<double>(f);
    }
    return s;
}

// ---- corpus manifest ----

inline constexpr const char* kSplitTrain = "train";
inline constexpr const char* kSplitValidation = "validation";
inline constexpr const char* kSplitTest = "test";

struct ManifestEntry {
    std::string file; // relative to the manifest's directory
    std::vector<std::string> label_path;
    double snr_db = 30.0;
    std::uint64_t noise_seed = 0;
    std::string split = kSplitTrain;
};

/// Slice-level corpus index. Files hold clean slices; the nominal SNR is
/// realized on load by seeded corruption, so sweep manifests can reference
/// the same clean signals with different noise seeds.
struct CorpusManifest {
    int format_version = 1;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> entries;
};

/// First line is a JSON header record, then one JSON record per entry.
inline void manifest_save(const CorpusManifest& m, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw io_error("manifest_save: cannot open " + tmp);
        nlohmann::json header = {{"kind", "corpus_manifest"},
                                 {"format_version", m.format_version},
                                 {"seed", m.seed},
                                 {"count", m.entries.size()}};
        out << header.dump() << '\n';
        for (const auto& e : m.entries) {
            nlohmann::json j = {{"file", e.file},
                                {"label_path", e.label_path},
                                {"snr_db", e.snr_db},
                                {"noise_seed", e.noise_seed},
                                {"split", e.split}};
            out << j.dump() << '\n';
        }
        if (!out) throw io_error("manifest_save: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline CorpusManifest manifest_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("manifest_load: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw format_error("manifest_load: missing header in " + path);
    CorpusManifest m;
    try {
        const auto header = nlohmann::json::parse(line);
        if (header.value("kind", "") != "corpus_manifest")
            throw format_error("manifest_load: kind field is not 'corpus_manifest' in " + path);
        m.format_version = header.at("format_version").get<int>();
        if (m.format_version != 1)
            throw format_error("manifest_load: unsupported format_version in " + path);
        m.seed = header.at("seed").get<std::uint64_t>();
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            ManifestEntry e;
            e.file = j.at("file").get<std::string>();
            e.label_path = j.at("label_path").get<std::vector<std::string>>();
            e.snr_db = j.at("snr_db").get<double>();
            e.noise_seed = j.at("noise_seed").get<std::uint64_t>();
            e.split = j.at("split").get<std::string>();
            m.entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& err) {
        throw format_error("manifest_load: bad record in " + path + ": " + err.what());
    }
    return m;
}

/// Clean slice, with the entry's metadata attached.
inline Signal load_entry_clean(const ManifestEntry& e, const std::string& corpus_dir) {
    Signal s = read_signal((std::filesystem::path(corpus_dir) / e.file).string());
    s.label_path = e.label_path;
    s.seed = e.noise_seed;
    return s;
}

/// Slice corrupted to the entry's nominal SNR with its noise seed.
inline Signal load_entry_at_snr(const ManifestEntry& e, const std::string& corpus_dir) {
    return add_awgn(load_entry_clean(e, corpus_dir), e.snr_db, e.noise_seed);
}

// ---- corpus building ----

struct CorpusOptions {
    std::size_t slice_len = 1024;
    std::size_t slices_per_parent = 5;
    std::size_t pad = 512; // leading/trailing silence around each burst
    double snr_db = 30.0;
    std::uint64_t seed = 0;
    double split_train = 0.7;
    double split_validation = 0.1;
    double split_test = 0.2;
    /// Per-class absolute split counts; overrides the fractions when set.
    std::optional<std::array<std::size_t, 3>> split_counts;
    double burst_threshold = 0.15; // applied relative to each spec's steady amplitude
    std::size_t rms_window = 64;
    std::size_t min_gap = 256;
};

namespace detail {

inline std::array<std::size_t, 3> split_quota(std::size_t n, const CorpusOptions& o) {
    if (o.split_counts) {
        const auto& c = *o.split_counts;
        if (c[0] + c[1] + c[2] != n)
            throw invalid_input("build_corpus: split counts do not add up to the class size");
        return c;
    }
    auto train = static_cast<std::size_t>(std::llround(o.split_train * static_cast<double>(n)));
    auto val = static_cast<std::size_t>(std::llround(o.split_validation * static_cast<double>(n)));
    if (train + val > n) val = n - train;
    return {train, val, n - train - val};
}

} // namespace detail

/// Generates per_class parent signals per device, pads them with silence,
/// finds the burst, slices the steady state to slice_len and writes the
/// clean slices plus a manifest into out_dir. Splits are assigned per class
/// by ranking entries on a seeded hash and cutting the quota boundaries, so
/// sizes are exact while membership stays hash-driven. Noise seeds derive
/// from the corpus seed per entry.
inline CorpusManifest build_corpus(const std::vector<DeviceSpec>& specs, std::size_t per_class,
                                   const std::string& out_dir, const CorpusOptions& opts = {}) {
    if (specs.empty()) throw invalid_input("build_corpus: no device specs");
    if (per_class == 0) throw invalid_input("build_corpus: per_class must be positive");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    CorpusManifest manifest;
    manifest.seed = opts.seed;

    for (std::size_t ci = 0; ci < specs.size(); ++ci) {
        const auto& spec = specs[ci];
        check_device_spec(spec);
        // Room for the ramp, the slices, a split point up to one AM period
        // past the ramp end plus the grid-alignment skip.
        const std::size_t burst_len = spec.transient_len +
                                      (opts.slices_per_parent + 1) * opts.slice_len + 768 +
                                      2 * opts.rms_window;

        std::vector<std::size_t> class_entries;
        for (std::size_t p = 0; p < per_class; ++p) {
            const auto parent_seed = derive_seed(opts.seed, ci, p);
            const auto burst = synth_generate(spec, burst_len, parent_seed);
            Signal padded;
            padded.samples.assign(opts.pad, 0.0);
            padded.samples.insert(padded.samples.end(), burst.samples.begin(), burst.samples.end());
            padded.samples.insert(padded.samples.end(), opts.pad, 0.0);
            padded.label_path = spec.class_path;

            const auto segments = detect_bursts(padded, opts.burst_threshold * spec.steady_amp,
                                                opts.min_gap, opts.rms_window);
            const BurstSegment* steady = nullptr;
            for (const auto& seg : segments)
                if (seg.kind == SegmentKind::steady) {
                    steady = &seg;
                    break;
                }
            if (!steady) throw degenerate_data("build_corpus: no steady segment found");

            // Cut on the burst's own slice grid: on-grid carriers then show
            // identical phases in every slice of every parent.
            BurstSegment aligned = *steady;
            const std::size_t rel = aligned.start_index > opts.pad ? aligned.start_index - opts.pad : 0;
            aligned.start_index = opts.pad + ((rel + opts.slice_len - 1) / opts.slice_len) * opts.slice_len;
            auto slices = slice_steady(padded, aligned, opts.slice_len);
            if (slices.size() < opts.slices_per_parent)
                throw degenerate_data("build_corpus: parent yielded too few slices");
            slices.resize(opts.slices_per_parent);

            for (std::size_t k = 0; k < slices.size(); ++k) {
                char name[96];
                std::snprintf(name, sizeof(name), "c%02zu_p%04zu_s%02zu.rfs", ci, p, k);
                write_signal(slices[k], (fs::path(out_dir) / name).string());
                ManifestEntry e;
                e.file = name;
                e.label_path = spec.class_path;
                e.snr_db = opts.snr_db;
                e.noise_seed = derive_seed(opts.seed, 1000003, manifest.entries.size());
                class_entries.push_back(manifest.entries.size());
                manifest.entries.push_back(std::move(e));
            }
        }

        // hash-ranked quota split within the class
        const auto quota = detail::split_quota(class_entries.size(), opts);
        std::vector<std::pair<std::uint64_t, std::size_t>> ranked;
        for (std::size_t i = 0; i < class_entries.size(); ++i)
            ranked.emplace_back(derive_seed(opts.seed, 2000003 + ci, i), class_entries[i]);
        std::sort(ranked.begin(), ranked.end());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const char* split = i < quota[0]                ? kSplitTrain
                                : i < quota[0] + quota[1]   ? kSplitValidation
                                                            : kSplitTest;
            manifest.entries[ranked[i].second].split = split;
        }
    }
    manifest_save(manifest, (fs::path(out_dir) / "manifest.jsonl").string());
    return manifest;
}

/// Same clean signals at a different nominal SNR: entry noise seeds are
/// re-derived from (corpus seed, sweep index, entry index).
inline CorpusManifest derive_sweep_manifest(const CorpusManifest& base, double snr_db,
                                            std::size_t sweep_index) {
    CorpusManifest out = base;
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        out.entries[i].snr_db = snr_db;
        out.entries[i].noise_seed = derive_seed(base.seed, 3000017 + sweep_index, i);
    }
    return out;
}

// ---- feature CSV ----

struct FeatureRow {
    std::string file;
    std::vector<std::string> label_path;
    std::string split;
    double snr_db = 0.0;
    FeatureVector features;
};

inline std::string join_path(const std::vector<std::string>& path) {
    std::string s;
    for (const auto& p : path) {
        if (!s.empty()) s += '/';
        s += p;
    }
    return s;
}

inline std::vector<std::string> split_path(const std::string& s) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream ss(s);
    while (std::getline(ss, part, '/')) out.push_back(part);
    return out;
}

/// Header: file,label_path,split,snr_db,<frozen feature names>. Values are
/// printed with 12 significant digits. Writing is atomic (temp + rename).
inline void write_feature_csv(const std::vector<FeatureRow>& rows, const std::string& path) {
    if (rows.empty()) throw invalid_input("write_feature_csv: no rows");
    const auto& names = rows.front().features.names;
    for (const auto& r : rows)
        if (r.features.names != names)
            throw invalid_input("write_feature_csv: inconsistent feature names across rows");

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw io_error("write_feature_csv: cannot open " + tmp);
        out << "file,label_path,split,snr_db";
        for (const auto& n : names) out << ',' << n;
        out << '\n';
        char buf[64];
        for (const auto& r : rows) {
            out << r.file << ',' << join_path(r.label_path) << ',' << r.split;
            std::snprintf(buf, sizeof(buf), "%.12g", r.snr_db);
            out << ',' << buf;
            for (double v : r.features.values) {
                std::snprintf(buf, sizeof(buf), "%.12g", v);
                out << ',' << buf;
            }
            out << '\n';
        }
        if (!out) throw io_error("write_feature_csv: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<FeatureRow> read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("read_feature_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw format_error("read_feature_csv: missing header in " + path);

    std::vector<std::string> cols;
    {
        std::string part;
        std::istringstream ss(line);
        while (std::getline(ss, part, ',')) cols.push_back(part);
    }
    if (cols.size() < 5 || cols[0] != "file" || cols[1] != "label_path" || cols[2] != "split" ||
        cols[3] != "snr_db")
        throw format_error("read_feature_csv: unexpected header in " + path);
    const std::vector<std::string> names(cols.begin() + 4, cols.end());

    std::vector<FeatureRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::string part;
        std::istringstream ss(line);
        while (std::getline(ss, part, ',')) parts.push_back(part);
        if (parts.size() != cols.size())
            throw format_error("read_feature_csv: wrong column count at " + path + ":" +
                               std::to_string(lineno));
        FeatureRow r;
        r.file = parts[0];
        r.label_path = split_path(parts[1]);
        r.split = parts[2];
        r.snr_db = std::strtod(parts[3].c_str(), nullptr);
        r.features.names = names;
        for (std::size_t i = 4; i < parts.size(); ++i) {
            r.features.values.push_back(std::strtod(parts[i].c_str(), nullptr));
            r.features.flags.push_back(false);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace rffp
