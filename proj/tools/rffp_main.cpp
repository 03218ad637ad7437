// Command-line front end for the RF fingerprinting pipeline: corpus
// generation, feature extraction, detector and classifier training,
// detection, identification, SNR sweeps and scalogram rendering.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rffp/rffp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void atomic_write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw rffp::io_error("cannot open " + tmp);
        out << text;
        if (!out) throw rffp::io_error("short write to " + tmp);
    }
    fs::rename(tmp, path);
}

/// Replay log: the resolved configuration of a command, written next to its
/// primary output.
void write_run_log(const std::string& out_path, const std::string& command, const json& resolved) {
    json j;
    j["command"] = command;
    j["resolved"] = resolved;
    atomic_write_text(out_path, j.dump(2) + "\n");
}

std::vector<rffp::ManifestEntry> split_entries(const rffp::CorpusManifest& m, const std::string& split) {
    std::vector<rffp::ManifestEntry> out;
    for (const auto& e : m.entries)
        if (split == "all" || e.split == split) out.push_back(e);
    return out;
}

struct LoadedCorpus {
    rffp::CorpusManifest manifest;
    std::string dir;
};

std::vector<LoadedCorpus> load_corpora(const std::vector<std::string>& manifest_paths) {
    std::vector<LoadedCorpus> out;
    for (const auto& p : manifest_paths)
        out.push_back({rffp::manifest_load(p), fs::path(p).parent_path().string()});
    return out;
}

rffp::FeatureVector featurize(const rffp::Signal& s, const std::string& method) {
    if (method == "hht-wpt") return rffp::assemble_hht_wpt(s);
    if (method == "cwt") return rffp::cwt_avg_features(rffp::cwt(s));
    if (method == "wst") return rffp::wst_avg_features(rffp::wst(s));
    throw rffp::invalid_input("unknown feature method: " + method);
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw rffp::invalid_input("bad number: " + s);
    return v;
}

// ---- generate ----

int cmd_generate(const std::string& tree_path, std::size_t per_class, double snr_db,
                 std::uint64_t seed, const std::string& out_dir, std::size_t slices_per_parent,
                 const std::string& split_fractions, const std::string& split_counts) {
    const auto tree = rffp::read_tree_file(tree_path);
    const auto specs = rffp::derive_device_specs(tree.leaf_paths(), seed);

    rffp::CorpusOptions opts;
    opts.seed = seed;
    opts.snr_db = snr_db;
    opts.slices_per_parent = slices_per_parent;
    if (!split_counts.empty()) {
        std::array<std::size_t, 3> c{};
        if (std::sscanf(split_counts.c_str(), "%zu,%zu,%zu", &c[0], &c[1], &c[2]) != 3)
            throw rffp::invalid_input("--split-counts wants train,validation,test");
        opts.split_counts = c;
    } else if (!split_fractions.empty()) {
        if (std::sscanf(split_fractions.c_str(), "%lf,%lf,%lf", &opts.split_train,
                        &opts.split_validation, &opts.split_test) != 3)
            throw rffp::invalid_input("--split wants train,validation,test fractions");
    }

    const auto manifest = rffp::build_corpus(specs, per_class, out_dir, opts);

    write_run_log((fs::path(out_dir) / "run_config.json").string(), "generate",
                  {{"classes", tree_path},
                   {"per_class", per_class},
                   {"snr_db", snr_db},
                   {"seed", seed},
                   {"out", out_dir},
                   {"slices_per_parent", slices_per_parent},
                   {"leaf_count", specs.size()}});

    std::map<std::string, std::size_t> by_split;
    for (const auto& e : manifest.entries) ++by_split[e.split];
    std::printf("generate: %zu classes, %zu slices (train %zu, validation %zu, test %zu) -> %s\n",
                specs.size(), manifest.entries.size(), by_split["train"], by_split["validation"],
                by_split["test"], out_dir.c_str());
    return 0;
}

// ---- extract ----

int cmd_extract(const std::vector<std::string>& manifests, const std::string& method,
                const std::string& split, bool clean, const std::string& out_csv) {
    const auto corpora = load_corpora(manifests);
    std::vector<rffp::FeatureRow> rows;
    for (const auto& corpus : corpora) {
        for (const auto& e : split_entries(corpus.manifest, split)) {
            const auto sig = clean ? rffp::load_entry_clean(e, corpus.dir)
                                   : rffp::load_entry_at_snr(e, corpus.dir);
            rffp::FeatureRow r;
            r.file = e.file;
            r.label_path = e.label_path;
            r.split = e.split;
            r.snr_db = clean ? 0.0 : e.snr_db;
            r.features = featurize(sig, method);
            rows.push_back(std::move(r));
        }
    }
    if (rows.empty()) throw rffp::invalid_input("extract: no entries matched split '" + split + "'");
    rffp::write_feature_csv(rows, out_csv);
    write_run_log(out_csv + ".run.json", "extract",
                  {{"manifests", manifests}, {"method", method}, {"split", split},
                   {"clean", clean}, {"out", out_csv}});
    std::printf("extract: %zu rows x %zu features (%s) -> %s\n", rows.size(),
                rows.front().features.size(), method.c_str(), out_csv.c_str());
    return 0;
}

// ---- detector model bundle ----

struct DetectorPaths {
    std::string descriptor, sdae, lof;
    explicit DetectorPaths(const std::string& prefix)
        : descriptor(prefix + ".detector.json"),
          sdae(prefix + ".sdae.json"),
          lof(prefix + ".lof.json") {}
};

struct Detector {
    rffp::SdaeModel sdae;
    rffp::LofModel lof;
    std::set<std::string> known_roots;
};

Detector load_detector(const std::string& prefix) {
    const DetectorPaths paths(prefix);
    std::ifstream in(paths.descriptor);
    if (!in) throw rffp::io_error("cannot open " + paths.descriptor);
    json j;
    in >> j;
    if (j.value("kind", "") != "detector")
        throw rffp::format_error("detector descriptor kind mismatch in " + paths.descriptor);
    Detector d;
    d.sdae = rffp::sdae_load(paths.sdae);
    d.lof = rffp::lof_load(paths.lof);
    for (const auto& r : j.at("known_roots")) d.known_roots.insert(r.get<std::string>());
    return d;
}

int cmd_train_detector(const std::string& manifest_path, const std::string& out_prefix,
                       std::uint64_t seed, int epochs, int batch_size, double learning_rate,
                       int k, const std::string& metric_name, double threshold,
                       const std::vector<std::string>& calibrate_manifests) {
    const auto corpus = load_corpora({manifest_path}).front();

    std::vector<rffp::Signal> train_clean;
    std::set<std::string> known_roots;
    for (const auto& e : split_entries(corpus.manifest, rffp::kSplitTrain)) {
        train_clean.push_back(rffp::load_entry_clean(e, corpus.dir));
        if (!e.label_path.empty()) known_roots.insert(e.label_path.front());
    }
    if (train_clean.empty()) throw rffp::invalid_input("train-detector: no train-split entries");

    rffp::TrainConfig cfg;
    cfg.seed = seed;
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.learning_rate = learning_rate;
    const auto sdae = rffp::sdae_train(train_clean, cfg);

    std::vector<std::vector<double>> latents;
    for (const auto& s : train_clean) latents.push_back(rffp::sdae_encode(sdae, s));
    auto lof = rffp::lof_fit(latents, k, rffp::lof_metric_from_string(metric_name), threshold);

    double calibrated_accuracy = -1.0;
    if (!calibrate_manifests.empty()) {
        // validation-split scores: training corpus counts as recognized,
        // every calibration corpus with a foreign root as unknown
        std::vector<std::pair<double, bool>> scored;
        auto add_split = [&](const LoadedCorpus& c) {
            for (const auto& e : split_entries(c.manifest, rffp::kSplitValidation)) {
                const bool outlier = e.label_path.empty() || !known_roots.count(e.label_path.front());
                const auto latent = rffp::sdae_encode(sdae, rffp::load_entry_at_snr(e, c.dir));
                scored.push_back({rffp::lof_score(lof, latent), outlier});
            }
        };
        add_split(corpus);
        for (const auto& c : load_corpora(calibrate_manifests)) add_split(c);
        if (scored.empty()) throw rffp::invalid_input("train-detector: empty calibration split");
        double best_thr = threshold;
        double best_acc = -1.0;
        for (double thr = 0.8; thr <= 8.0 + 1e-9; thr += 0.01) {
            std::size_t ok = 0;
            for (const auto& [s, truth] : scored) ok += ((s > thr) == truth);
            const double acc = static_cast<double>(ok) / static_cast<double>(scored.size());
            if (acc > best_acc) {
                best_acc = acc;
                best_thr = thr;
            }
        }
        lof.threshold = best_thr;
        calibrated_accuracy = best_acc;
    }

    const DetectorPaths paths(out_prefix);
    rffp::sdae_save(sdae, paths.sdae);
    rffp::lof_save(lof, paths.lof);
    json j;
    j["kind"] = "detector";
    j["format_version"] = 1;
    j["known_roots"] = std::vector<std::string>(known_roots.begin(), known_roots.end());
    j["sdae"] = fs::path(paths.sdae).filename().string();
    j["lof"] = fs::path(paths.lof).filename().string();
    atomic_write_text(paths.descriptor, j.dump(2) + "\n");

    write_run_log(out_prefix + ".run.json", "train-detector",
                  {{"manifest", manifest_path}, {"seed", seed}, {"epochs", epochs},
                   {"batch_size", batch_size}, {"learning_rate", learning_rate},
                   {"k", k}, {"metric", metric_name}, {"threshold", lof.threshold},
                   {"calibrate", calibrate_manifests}});

    std::printf("train-detector: %zu train slices, final loss %.5f (validation %.5f), "
                "lof k=%d metric=%s threshold=%.2f",
                train_clean.size(), sdae.train_meta.final_train_loss,
                sdae.train_meta.final_validation_loss, lof.k, rffp::to_string(lof.metric),
                lof.threshold);
    if (calibrated_accuracy >= 0.0) std::printf(" (calibration accuracy %.3f)", calibrated_accuracy);
    std::printf(" -> %s\n", paths.descriptor.c_str());
    return 0;
}

int cmd_detect(const std::string& model_prefix, const std::vector<std::string>& manifests,
               const std::string& split, const std::string& out_csv) {
    const auto detector = load_detector(model_prefix);
    const auto corpora = load_corpora(manifests);

    std::string csv = "file,label_path,snr_db,truth,decision,score\n";
    std::vector<std::string> pred, truth;
    char buf[64];
    for (const auto& corpus : corpora) {
        for (const auto& e : split_entries(corpus.manifest, split)) {
            if (e.label_path.empty()) throw rffp::invalid_input("detect: entry without labels");
            const auto latent = rffp::sdae_encode(detector.sdae, rffp::load_entry_at_snr(e, corpus.dir));
            const auto decision = rffp::lof_classify(detector.lof, latent);
            const bool is_outlier_truth = !detector.known_roots.count(e.label_path.front());
            pred.push_back(decision.outlier ? "outlier" : "inlier");
            truth.push_back(is_outlier_truth ? "outlier" : "inlier");
            std::snprintf(buf, sizeof(buf), "%.12g", decision.score);
            csv += e.file + ',' + rffp::join_path(e.label_path) + ',' +
                   std::to_string(e.snr_db) + ',' + truth.back() + ',' + pred.back() + ',' + buf +
                   '\n';
        }
    }
    if (pred.empty()) throw rffp::invalid_input("detect: no entries matched split '" + split + "'");
    atomic_write_text(out_csv, csv);
    write_run_log(out_csv + ".run.json", "detect",
                  {{"model", model_prefix}, {"manifests", manifests}, {"split", split},
                   {"out", out_csv}});

    const auto m = rffp::flat_metrics(pred, truth);
    std::printf("detect: %zu signals, accuracy %.3f", pred.size(), m.overall_accuracy);
    if (m.per_class.count("outlier")) {
        const auto& o = m.per_class.at("outlier");
        std::printf(", outlier precision %.3f recall %.3f f1 %.3f", o.precision, o.recall, o.f1);
    }
    std::printf(" -> %s\n", out_csv.c_str());
    return 0;
}

// ---- hierarchical classifier ----

int cmd_train_hc(const std::string& features_csv, const std::string& tree_path,
                 const std::string& out_path, int knn_k, double confidence_floor) {
    const auto tree = rffp::read_tree_file(tree_path);
    const auto rows = rffp::read_feature_csv(features_csv);

    std::vector<std::vector<double>> feats;
    std::vector<std::vector<std::string>> paths;
    for (const auto& r : rows) {
        if (r.split != rffp::kSplitTrain) continue;
        feats.push_back(r.features.values);
        paths.push_back(r.label_path);
    }
    if (feats.empty()) throw rffp::invalid_input("train-hc: no train-split rows in " + features_csv);

    const auto cascade = rffp::hc_train(tree, feats, paths, knn_k, confidence_floor);
    rffp::cascade_save(cascade, out_path);
    write_run_log(out_path + ".run.json", "train-hc",
                  {{"features", features_csv}, {"tree", tree_path}, {"knn_k", knn_k},
                   {"confidence_floor", confidence_floor}, {"out", out_path}});

    std::printf("train-hc: %zu training rows, %zu node classifiers", feats.size(),
                cascade.node_classifiers.size());
    for (const auto& [node, clf] : cascade.node_classifiers)
        std::printf(" %s:%zu", node.c_str(), clf.features.size());
    std::printf(" -> %s\n", out_path.c_str());
    return 0;
}

struct IdentifyOutcome {
    std::vector<rffp::PredictionPath> predicted;
    std::vector<std::vector<std::string>> truth; // below the root
    std::string per_sample_csv;
};

IdentifyOutcome run_identify(const rffp::HierarchyCascade& cascade,
                             const std::vector<rffp::FeatureRow>& rows, const std::string& split) {
    IdentifyOutcome out;
    out.per_sample_csv = "file,truth_path,predicted_path,confidences\n";
    char buf[64];
    for (const auto& r : rows) {
        if (split != "all" && r.split != split) continue;
        if (r.label_path.empty() || r.label_path.front() != cascade.tree.root)
            throw rffp::invalid_input("identify: row label path does not start at the tree root");
        const auto pred = rffp::hc_predict(cascade, r.features.values);
        out.predicted.push_back(pred);
        out.truth.push_back({r.label_path.begin() + 1, r.label_path.end()});
        std::string confs;
        for (double c : pred.confidences) {
            std::snprintf(buf, sizeof(buf), "%.6g", c);
            if (!confs.empty()) confs += ';';
            confs += buf;
        }
        out.per_sample_csv += r.file + ',' + rffp::join_path(r.label_path) + ',' +
                              cascade.tree.root +
                              (pred.labels.empty() ? "" : "/" + rffp::join_path(pred.labels)) + ',' +
                              confs + '\n';
    }
    return out;
}

std::string metrics_report(const rffp::HierarchyCascade& cascade, const IdentifyOutcome& run,
                           std::size_t* max_depth_out = nullptr) {
    std::size_t max_depth = 0;
    for (const auto& t : run.truth) max_depth = std::max(max_depth, t.size());
    if (max_depth_out) *max_depth_out = max_depth;

    std::string csv = "metric,level_or_node,value\n";
    char buf[64];
    auto add = [&](const std::string& metric, const std::string& where, double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        csv += metric + ',' + where + ',' + buf + '\n';
    };

    for (std::size_t level = 1; level <= max_depth; ++level) {
        const auto hm = rffp::hier_metrics_at_level(run.predicted, run.truth, cascade.tree, level);
        add("hP", "level" + std::to_string(level), hm.hp);
        add("hR", "level" + std::to_string(level), hm.hr);
        add("hF1", "level" + std::to_string(level), hm.hf);
    }

    // level-1 and exact-path accuracy
    std::size_t l1 = 0, exact = 0;
    for (std::size_t i = 0; i < run.truth.size(); ++i) {
        if (!run.predicted[i].labels.empty() && !run.truth[i].empty() &&
            run.predicted[i].labels.front() == run.truth[i].front())
            ++l1;
        if (run.predicted[i].labels == run.truth[i]) ++exact;
    }
    add("accuracy", "level1", static_cast<double>(l1) / static_cast<double>(run.truth.size()));
    add("accuracy", "leaf", static_cast<double>(exact) / static_cast<double>(run.truth.size()));

    // flat metrics per node classifier, evaluated on the samples whose true
    // path passes through that node
    for (const auto& [node, clf] : cascade.node_classifiers) {
        (void)clf;
        std::vector<std::string> pred, truth;
        for (std::size_t i = 0; i < run.truth.size(); ++i) {
            std::vector<std::string> full_true{cascade.tree.root};
            full_true.insert(full_true.end(), run.truth[i].begin(), run.truth[i].end());
            std::vector<std::string> full_pred{cascade.tree.root};
            full_pred.insert(full_pred.end(), run.predicted[i].labels.begin(),
                             run.predicted[i].labels.end());
            for (std::size_t s = 0; s + 1 < full_true.size(); ++s) {
                if (full_true[s] != node) continue;
                truth.push_back(full_true[s + 1]);
                pred.push_back(s + 1 < full_pred.size() && full_pred[s] == node ? full_pred[s + 1]
                                                                                : "(none)");
            }
        }
        if (truth.empty()) continue;
        const auto fm = rffp::flat_metrics(pred, truth);
        add("node_accuracy", node, fm.overall_accuracy);
        add("node_macro_precision", node, fm.macro.precision);
        add("node_macro_recall", node, fm.macro.recall);
        add("node_macro_f1", node, fm.macro.f1);
    }
    return csv;
}

int cmd_identify(const std::string& model_path, const std::string& features_csv,
                 const std::string& split, const std::string& out_csv,
                 const std::string& metrics_csv_arg, double confidence_floor, bool floor_set) {
    auto cascade = rffp::cascade_load(model_path);
    if (floor_set) cascade.confidence_floor = confidence_floor;
    const auto rows = rffp::read_feature_csv(features_csv);
    const auto run = run_identify(cascade, rows, split);
    if (run.truth.empty()) throw rffp::invalid_input("identify: no rows matched split '" + split + "'");

    const std::string metrics_csv = metrics_csv_arg.empty() ? out_csv + ".metrics.csv" : metrics_csv_arg;
    atomic_write_text(out_csv, run.per_sample_csv);
    std::size_t max_depth = 0;
    atomic_write_text(metrics_csv, metrics_report(cascade, run, &max_depth));
    write_run_log(out_csv + ".run.json", "identify",
                  {{"model", model_path}, {"features", features_csv}, {"split", split},
                   {"out", out_csv}, {"metrics_out", metrics_csv},
                   {"confidence_floor", cascade.confidence_floor}});

    std::size_t l1 = 0, exact = 0;
    for (std::size_t i = 0; i < run.truth.size(); ++i) {
        if (!run.predicted[i].labels.empty() && run.predicted[i].labels.front() == run.truth[i].front())
            ++l1;
        if (run.predicted[i].labels == run.truth[i]) ++exact;
    }
    std::printf("identify: %zu samples, level-1 accuracy %.3f, leaf accuracy %.3f",
                run.truth.size(), static_cast<double>(l1) / run.truth.size(),
                static_cast<double>(exact) / run.truth.size());
    for (std::size_t level = 1; level <= max_depth; ++level) {
        const auto hm = rffp::hier_metrics_at_level(run.predicted, run.truth, cascade.tree, level);
        std::printf(", level%zu hP/hR/hF1 %.3f/%.3f/%.3f", level, hm.hp, hm.hr, hm.hf);
    }
    std::printf(" -> %s (metrics %s)\n", out_csv.c_str(), metrics_csv.c_str());
    return 0;
}

// ---- SNR sweep ----

int cmd_snr_sweep(const std::string& stage, const std::string& model,
                  const std::vector<std::string>& manifests, const std::string& snr_list,
                  const std::string& method, const std::string& out_csv) {
    std::vector<double> snrs;
    {
        std::istringstream ss(snr_list);
        std::string part;
        while (std::getline(ss, part, ',')) snrs.push_back(parse_double(part));
    }
    if (snrs.empty()) throw rffp::invalid_input("snr-sweep: empty SNR list");

    const auto corpora = load_corpora(manifests);

    std::string csv;
    if (stage == "detect") {
        const auto detector = load_detector(model); // loading is the warm-up
        csv = "snr_db,accuracy,outlier_recall,seconds\n";
        char buf[160];
        for (std::size_t si = 0; si < snrs.size(); ++si) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<std::string> pred, truth;
            for (const auto& corpus : corpora) {
                const auto swept = rffp::derive_sweep_manifest(corpus.manifest, snrs[si], si);
                for (const auto& e : split_entries(swept, rffp::kSplitTest)) {
                    const auto latent =
                        rffp::sdae_encode(detector.sdae, rffp::load_entry_at_snr(e, corpus.dir));
                    pred.push_back(rffp::lof_classify(detector.lof, latent).outlier ? "outlier"
                                                                                    : "inlier");
                    truth.push_back(detector.known_roots.count(e.label_path.front()) ? "inlier"
                                                                                     : "outlier");
                }
            }
            const auto m = rffp::flat_metrics(pred, truth);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double orec = m.per_class.count("outlier") ? m.per_class.at("outlier").recall : 0.0;
            std::snprintf(buf, sizeof(buf), "%g,%.12g,%.12g,%.3f\n", snrs[si], m.overall_accuracy,
                          orec, secs);
            csv += buf;
            std::printf("snr %6.1f dB: detection accuracy %.3f (%.2fs)\n", snrs[si],
                        m.overall_accuracy, secs);
        }
    } else if (stage == "identify") {
        const auto cascade = rffp::cascade_load(model);
        csv = "snr_db,level1_accuracy,leaf_accuracy,hP,hR,hF1,seconds\n";
        char buf[224];
        for (std::size_t si = 0; si < snrs.size(); ++si) {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<rffp::PredictionPath> predicted;
            std::vector<std::vector<std::string>> truth;
            for (const auto& corpus : corpora) {
                const auto swept = rffp::derive_sweep_manifest(corpus.manifest, snrs[si], si);
                for (const auto& e : split_entries(swept, rffp::kSplitTest)) {
                    const auto fv = featurize(rffp::load_entry_at_snr(e, corpus.dir), method);
                    predicted.push_back(rffp::hc_predict(cascade, fv.values));
                    truth.push_back({e.label_path.begin() + 1, e.label_path.end()});
                }
            }
            if (truth.empty()) throw rffp::invalid_input("snr-sweep: no test entries");
            std::size_t l1 = 0, exact = 0;
            for (std::size_t i = 0; i < truth.size(); ++i) {
                if (!predicted[i].labels.empty() && predicted[i].labels.front() == truth[i].front())
                    ++l1;
                if (predicted[i].labels == truth[i]) ++exact;
            }
            const auto hm = rffp::hier_metrics(predicted, truth, cascade.tree);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::snprintf(buf, sizeof(buf), "%g,%.12g,%.12g,%.12g,%.12g,%.12g,%.3f\n", snrs[si],
                          static_cast<double>(l1) / truth.size(),
                          static_cast<double>(exact) / truth.size(), hm.hp, hm.hr, hm.hf, secs);
            csv += buf;
            std::printf("snr %6.1f dB: level-1 accuracy %.3f leaf %.3f (%.2fs)\n", snrs[si],
                        static_cast<double>(l1) / truth.size(),
                        static_cast<double>(exact) / truth.size(), secs);
        }
    } else {
        throw rffp::invalid_input("snr-sweep: stage must be detect or identify");
    }

    atomic_write_text(out_csv, csv);
    write_run_log(out_csv + ".run.json", "snr-sweep",
                  {{"stage", stage}, {"model", model}, {"manifests", manifests},
                   {"snrs", snr_list}, {"method", method}, {"out", out_csv}});
    std::printf("snr-sweep: %zu points -> %s\n", snrs.size(), out_csv.c_str());
    return 0;
}

// ---- render-scalogram ----

int cmd_render_scalogram(const std::string& in_path, const std::string& out_path, int num_scales,
                         int voices) {
    const auto sig = rffp::read_signal(in_path);
    rffp::CwtConfig cfg;
    cfg.num_scales = num_scales;
    cfg.voices_per_octave = voices;
    const auto scal = rffp::cwt(sig, cfg);
    rffp::render_scalogram(scal, out_path);
    std::printf("render-scalogram: %zu x %zu -> %s\n", scal.num_scales(), scal.num_samples(),
                out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RF device fingerprinting pipeline"};
    app.require_subcommand(1);
    app.set_config("--config");

    // generate
    auto* gen = app.add_subcommand("generate", "build a synthetic corpus from a class tree");
    std::string gen_tree, gen_out, gen_split, gen_counts;
    std::size_t gen_per_class = 50, gen_slices = 5;
    double gen_snr = 30.0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--classes", gen_tree, "class tree file (parent child per line)")->required();
    gen->add_option("--per-class", gen_per_class, "parent signals per class");
    gen->add_option("--snr", gen_snr, "nominal corpus SNR in dB");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output corpus directory")->required();
    gen->add_option("--slices-per-parent", gen_slices, "steady-state slices kept per parent");
    gen->add_option("--split", gen_split, "train,validation,test fractions (default 0.7,0.1,0.2)");
    gen->add_option("--split-counts", gen_counts, "absolute per-class split counts train,val,test");

    // extract
    auto* ext = app.add_subcommand("extract", "extract feature vectors into a CSV");
    std::vector<std::string> ext_manifests;
    std::string ext_method = "hht-wpt", ext_split = "all", ext_out;
    bool ext_clean = false;
    ext->add_option("--manifest", ext_manifests, "corpus manifest(s)")->required();
    ext->add_option("--method", ext_method, "hht-wpt | cwt | wst")
        ->check(CLI::IsMember({"hht-wpt", "cwt", "wst"}));
    ext->add_option("--split", ext_split, "train | validation | test | all");
    ext->add_flag("--clean", ext_clean, "skip the nominal-SNR corruption");
    ext->add_option("--out", ext_out, "output CSV")->required();

    // train-detector
    auto* td = app.add_subcommand("train-detector", "train the SDAE compressor and LOF detector");
    std::string td_manifest, td_out, td_metric = "manhattan";
    std::vector<std::string> td_calibrate;
    std::uint64_t td_seed = 0;
    int td_epochs = 100, td_batch = 128, td_k = 20;
    double td_lr = 1e-3, td_threshold = 1.0;
    td->add_option("--manifest", td_manifest, "recognized-device corpus manifest")->required();
    td->add_option("--out", td_out, "output model prefix")->required();
    td->add_option("--seed", td_seed, "training seed");
    td->add_option("--epochs", td_epochs, "training epochs");
    td->add_option("--batch", td_batch, "batch size");
    td->add_option("--lr", td_lr, "learning rate");
    td->add_option("--k", td_k, "LOF nearest neighbors");
    td->add_option("--metric", td_metric, "manhattan | euclidean | cosine")
        ->check(CLI::IsMember({"manhattan", "euclidean", "cosine"}));
    td->add_option("--threshold", td_threshold, "LOF decision threshold");
    td->add_option("--calibrate-manifest", td_calibrate,
                   "additional manifest(s) whose validation split calibrates the threshold");

    // detect
    auto* det = app.add_subcommand("detect", "classify signals as recognized or unknown");
    std::string det_model, det_split = "test", det_out;
    std::vector<std::string> det_manifests;
    det->add_option("--model", det_model, "detector model prefix")->required();
    det->add_option("--manifest", det_manifests, "corpus manifest(s)")->required();
    det->add_option("--split", det_split, "train | validation | test | all");
    det->add_option("--out", det_out, "per-signal report CSV")->required();

    // train-hc
    auto* th = app.add_subcommand("train-hc", "train the hierarchical classifier cascade");
    std::string th_features, th_tree, th_out;
    int th_k = 5;
    double th_floor = 0.0;
    th->add_option("--features", th_features, "training feature CSV")->required();
    th->add_option("--tree", th_tree, "class tree file")->required();
    th->add_option("--out", th_out, "output cascade file")->required();
    th->add_option("--knn-k", th_k, "kNN neighbors per node classifier");
    th->add_option("--confidence-floor", th_floor, "early-stop confidence floor");

    // identify
    auto* idf = app.add_subcommand("identify", "predict hierarchy paths and report metrics");
    std::string id_model, id_features, id_split = "test", id_out, id_metrics;
    double id_floor = 0.0;
    bool id_floor_set = false;
    idf->add_option("--model", id_model, "cascade file")->required();
    idf->add_option("--features", id_features, "feature CSV")->required();
    idf->add_option("--split", id_split, "train | validation | test | all");
    idf->add_option("--out", id_out, "per-sample prediction CSV")->required();
    idf->add_option("--metrics-out", id_metrics, "metrics CSV (default <out>.metrics.csv)");
    idf->add_option("--confidence-floor", id_floor, "override the cascade's confidence floor")
        ->each([&](const std::string&) { id_floor_set = true; });

    // snr-sweep
    auto* sw = app.add_subcommand("snr-sweep", "evaluate a stage across an SNR grid");
    std::string sw_stage, sw_model, sw_snrs = "30,25,20,15,10,5,0,-8", sw_method = "hht-wpt", sw_out;
    std::vector<std::string> sw_manifests;
    sw->add_option("--stage", sw_stage, "detect | identify")
        ->required()
        ->check(CLI::IsMember({"detect", "identify"}));
    sw->add_option("--model", sw_model, "detector prefix or cascade file")->required();
    sw->add_option("--manifest", sw_manifests, "corpus manifest(s)")->required();
    sw->add_option("--snrs", sw_snrs, "comma-separated SNR list in dB");
    sw->add_option("--method", sw_method, "feature method for the identify stage")
        ->check(CLI::IsMember({"hht-wpt", "cwt", "wst"}));
    sw->add_option("--out", sw_out, "output CSV")->required();

    // render-scalogram
    auto* rs = app.add_subcommand("render-scalogram", "render a signal's scalogram as a PGM image");
    std::string rs_in, rs_out;
    int rs_scales = 114, rs_voices = 12;
    rs->add_option("--in", rs_in, "input signal file")->required();
    rs->add_option("--out", rs_out, "output PGM path")->required();
    rs->add_option("--num-scales", rs_scales, "scale count");
    rs->add_option("--voices", rs_voices, "voices per octave");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_tree, gen_per_class, gen_snr, gen_seed, gen_out, gen_slices,
                                gen_split, gen_counts);
        if (ext->parsed()) return cmd_extract(ext_manifests, ext_method, ext_split, ext_clean, ext_out);
        if (td->parsed())
            return cmd_train_detector(td_manifest, td_out, td_seed, td_epochs, td_batch, td_lr,
                                      td_k, td_metric, td_threshold, td_calibrate);
        if (det->parsed()) return cmd_detect(det_model, det_manifests, det_split, det_out);
        if (th->parsed()) return cmd_train_hc(th_features, th_tree, th_out, th_k, th_floor);
        if (idf->parsed())
            return cmd_identify(id_model, id_features, id_split, id_out, id_metrics, id_floor,
                                id_floor_set);
        if (sw->parsed())
            return cmd_snr_sweep(sw_stage, sw_model, sw_manifests, sw_snrs, sw_method, sw_out);
        if (rs->parsed()) return cmd_render_scalogram(rs_in, rs_out, rs_scales, rs_voices);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
