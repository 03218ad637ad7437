#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rffp/errors.hpp"

namespace rffp {

/// Class hierarchy: a rooted tree of label strings.
struct LabelTree {
    std::string root;
    std::map<std::string, std::vector<std::string>> children; // sorted child lists
    std::map<std::string, std::string> parent;

    bool contains(const std::string& node) const {
        return node == root || parent.count(node) > 0;
    }
    bool is_leaf(const std::string& node) const {
        const auto it = children.find(node);
        return it == children.end() || it->second.empty();
    }
    const std::vector<std::string>& children_of(const std::string& node) const {
        static const std::vector<std::string> none;
        const auto it = children.find(node);
        return it == children.end() ? none : it->second;
    }
    /// True if `path` walks tree edges starting at the root's children
    /// (the root itself is not part of the path).
    bool valid_path_below_root(const std::vector<std::string>& path) const {
        std::string at = root;
        for (const auto& step : path) {
            const auto& kids = children_of(at);
            if (std::find(kids.begin(), kids.end(), step) == kids.end()) return false;
            at = step;
        }
        return true;
    }
    std::vector<std::vector<std::string>> leaf_paths() const {
        std::vector<std::vector<std::string>> out;
        std::vector<std::string> cur{root};
        walk(root, cur, out);
        return out;
    }

private:
    void walk(const std::string& node, std::vector<std::string>& cur,
              std::vector<std::vector<std::string>>& out) const {
        if (is_leaf(node)) {
            out.push_back(cur);
            return;
        }
        for (const auto& c : children_of(node)) {
            cur.push_back(c);
            walk(c, cur, out);
            cur.pop_back();
        }
    }
};

/// Builds a tree from `parent child` edges; the root is the one parent that
/// never appears as a child.
inline LabelTree make_label_tree(const std::vector<std::pair<std::string, std::string>>& edges) {
    if (edges.empty()) throw invalid_input("make_label_tree: no edges");
    LabelTree tree;
    std::set<std::string> nodes, kids;
    for (const auto& [p, c] : edges) {
        if (p == c) throw invalid_input("make_label_tree: self edge at " + p);
        if (tree.parent.count(c)) throw invalid_input("make_label_tree: node has two parents: " + c);
        tree.parent[c] = p;
        tree.children[p].push_back(c);
        nodes.insert(p);
        nodes.insert(c);
        kids.insert(c);
    }
    std::vector<std::string> roots;
    for (const auto& n : nodes)
        if (!kids.count(n)) roots.push_back(n);
    if (roots.size() != 1)
        throw invalid_input("make_label_tree: expected exactly one root, found " +
                            std::to_string(roots.size()));
    tree.root = roots.front();
    for (auto& [_, c] : tree.children) std::sort(c.begin(), c.end());

    // every node must reach the root (no disconnected cycles)
    for (const auto& n : nodes) {
        std::string at = n;
        std::size_t hops = 0;
        while (at != tree.root) {
            const auto it = tree.parent.find(at);
            if (it == tree.parent.end() || ++hops > nodes.size())
                throw invalid_input("make_label_tree: cycle or disconnected node at " + n);
            at = it->second;
        }
    }
    return tree;
}

/// Plain-text tree format: one `parent child` pair per line; blank lines and
/// lines starting with '#' are skipped.
inline LabelTree read_tree_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("read_tree_file: cannot open " + path);
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string p, c, extra;
        if (!(ss >> p >> c) || (ss >> extra))
            throw format_error("read_tree_file: expected 'parent child' at " + path + ":" +
                               std::to_string(lineno));
        edges.emplace_back(p, c);
    }
    return make_label_tree(edges);
}

inline void write_tree_file(const LabelTree& tree, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("write_tree_file: cannot open " + path);
    std::vector<std::string> stack{tree.root};
    while (!stack.empty()) {
        const auto node = stack.back();
        stack.pop_back();
        for (const auto& c : tree.children_of(node)) {
            out << node << ' ' << c << '\n';
            stack.push_back(c);
        }
    }
    if (!out) throw io_error("write_tree_file: short write to " + path);
}

// ---- k-nearest-neighbor node classifier ----

struct KnnPrediction {
    std::string label;
    double confidence = 0.0; // vote fraction of the winning class
};

/// Brute-force exact kNN with euclidean distance. Neighbor ties at the k-th
/// distance break by training index; vote ties break by smaller aggregate
/// distance, then by smallest voter index.
struct KnnClassifier {
    std::vector<std::vector<double>> features;
    std::vector<std::string> labels;
    int k = 5;

    std::size_t dimension() const { return features.empty() ? 0 : features.front().size(); }
};

inline KnnClassifier knn_fit(const std::vector<std::vector<double>>& features,
                             const std::vector<std::string>& labels, int k = 5) {
    if (features.size() != labels.size()) throw invalid_input("knn_fit: feature/label size mismatch");
    if (k < 1) throw invalid_input("knn_fit: k must be >= 1");
    if (features.size() < static_cast<std::size_t>(k))
        throw invalid_input("knn_fit: fewer samples than k");
    const std::size_t dim = features.front().size();
    for (const auto& f : features)
        if (f.size() != dim) throw invalid_input("knn_fit: inconsistent feature dimension");
    return KnnClassifier{features, labels, k};
}

inline KnnPrediction knn_predict(const KnnClassifier& model, const std::vector<double>& query) {
    if (query.size() != model.dimension()) throw invalid_input("knn_predict: dimension mismatch");

    const std::size_t n = model.features.size();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < query.size(); ++j) {
            const double diff = query[j] - model.features[i][j];
            d += diff * diff;
        }
        order[i] = {d, i};
    }
    const auto kth = order.begin() + model.k;
    std::partial_sort(order.begin(), kth, order.end());

    struct Tally {
        int votes = 0;
        double dist_sum = 0.0;
        std::size_t first_index = 0;
    };
    std::map<std::string, Tally> tally;
    for (int i = 0; i < model.k; ++i) {
        const auto& [d, idx] = order[static_cast<std::size_t>(i)];
        auto& t = tally[model.labels[idx]];
        if (t.votes == 0) t.first_index = idx;
        ++t.votes;
        t.dist_sum += std::sqrt(d);
        t.first_index = std::min(t.first_index, idx);
    }

    const Tally* best = nullptr;
    const std::string* best_label = nullptr;
    for (const auto& [label, t] : tally) {
        bool take = best == nullptr;
        if (!take) {
            if (t.votes != best->votes) take = t.votes > best->votes;
            else if (t.dist_sum != best->dist_sum) take = t.dist_sum < best->dist_sum;
            else take = t.first_index < best->first_index;
        }
        if (take) {
            best = &t;
            best_label = &label;
        }
    }
    return KnnPrediction{*best_label, static_cast<double>(best->votes) / static_cast<double>(model.k)};
}

// ---- local-classifier-per-parent cascade ----

/// One kNN classifier at every parent node with two or more children;
/// single-child parents pass through. Prediction stops early when a step's
/// confidence falls below the floor (non-mandatory leaf-node prediction).
struct HierarchyCascade {
    LabelTree tree;
    std::map<std::string, KnnClassifier> node_classifiers;
    double confidence_floor = 0.0;
};

/// Path below the root plus the per-step confidences.
struct PredictionPath {
    std::vector<std::string> labels;
    std::vector<double> confidences;
};

/// Label paths must be full root-to-node paths (starting with the root).
inline HierarchyCascade hc_train(const LabelTree& tree,
                                 const std::vector<std::vector<double>>& features,
                                 const std::vector<std::vector<std::string>>& label_paths,
                                 int k = 5, double confidence_floor = 0.0) {
    if (features.size() != label_paths.size())
        throw invalid_input("hc_train: feature/path size mismatch");

    auto path_string = [](const std::vector<std::string>& p) {
        std::string s;
        for (const auto& n : p) {
            if (!s.empty()) s += '/';
            s += n;
        }
        return s;
    };

    std::map<std::string, std::vector<std::vector<double>>> node_features;
    std::map<std::string, std::vector<std::string>> node_labels;
    for (std::size_t i = 0; i < label_paths.size(); ++i) {
        const auto& path = label_paths[i];
        if (path.empty() || path.front() != tree.root ||
            !tree.valid_path_below_root({path.begin() + 1, path.end()}))
            throw invalid_input("hc_train: label path not in tree: " + path_string(path));
        for (std::size_t step = 0; step + 1 < path.size(); ++step) {
            if (tree.children_of(path[step]).size() < 2) continue;
            node_features[path[step]].push_back(features[i]);
            node_labels[path[step]].push_back(path[step + 1]);
        }
    }

    HierarchyCascade cascade;
    cascade.tree = tree;
    cascade.confidence_floor = confidence_floor;
    for (const auto& [node, feats] : node_features) {
        const int node_k = std::min<int>(k, static_cast<int>(feats.size()));
        cascade.node_classifiers.emplace(node, knn_fit(feats, node_labels[node], node_k));
    }
    return cascade;
}

/// Top-down descent from the root: classify, step to the predicted child,
/// repeat until a leaf or until a step's confidence drops below the floor
/// (that step is not taken). A floor above 1 therefore yields an empty path.
inline PredictionPath hc_predict(const HierarchyCascade& cascade, const std::vector<double>& query) {
    PredictionPath out;
    std::string at = cascade.tree.root;
    while (!cascade.tree.is_leaf(at)) {
        const auto& kids = cascade.tree.children_of(at);
        std::string next;
        double conf = 1.0;
        if (kids.size() == 1) {
            next = kids.front();
        } else {
            const auto it = cascade.node_classifiers.find(at);
            if (it == cascade.node_classifiers.end())
                throw invalid_input("hc_predict: no classifier for node " + at);
            const auto pred = knn_predict(it->second, query);
            next = pred.label;
            conf = pred.confidence;
        }
        if (conf < cascade.confidence_floor) break;
        out.labels.push_back(next);
        out.confidences.push_back(conf);
        at = next;
    }
    return out;
}

// ---- flat metrics ----

struct ClassMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool flagged = false; // some denominator was zero
};

struct FlatMetrics {
    std::map<std::string, ClassMetrics> per_class;
    ClassMetrics macro;
    double overall_accuracy = 0.0;
};

/// One-vs-rest confusion counts per class; macro is the unweighted mean over
/// classes. Zero-denominator ratios are reported as 0 and flagged.
inline FlatMetrics flat_metrics(const std::vector<std::string>& predictions,
                                const std::vector<std::string>& truth) {
    if (predictions.size() != truth.size())
        throw invalid_input("flat_metrics: prediction/truth length mismatch");
    if (predictions.empty()) throw invalid_input("flat_metrics: empty inputs");

    std::set<std::string> classes(truth.begin(), truth.end());
    classes.insert(predictions.begin(), predictions.end());
    const double total = static_cast<double>(truth.size());

    FlatMetrics out;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (predictions[i] == truth[i]) ++correct;
    out.overall_accuracy = static_cast<double>(correct) / total;

    for (const auto& cls : classes) {
        double tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool is_true = truth[i] == cls;
            const bool is_pred = predictions[i] == cls;
            if (is_true && is_pred) ++tp;
            else if (!is_true && is_pred) ++fp;
            else if (is_true && !is_pred) ++fn;
            else ++tn;
        }
        ClassMetrics m;
        m.accuracy = (tp + tn) / total;
        if (tp + fp > 0) m.precision = tp / (tp + fp);
        else m.flagged = true;
        if (tp + fn > 0) m.recall = tp / (tp + fn);
        else m.flagged = true;
        if (m.precision + m.recall > 0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        else m.flagged = true;
        out.per_class[cls] = m;
    }

    const double nc = static_cast<double>(out.per_class.size());
    for (const auto& [_, m] : out.per_class) {
        out.macro.accuracy += m.accuracy / nc;
        out.macro.precision += m.precision / nc;
        out.macro.recall += m.recall / nc;
        out.macro.f1 += m.f1 / nc;
        out.macro.flagged = out.macro.flagged || m.flagged;
    }
    return out;
}

// ---- hierarchical metrics ----

struct HierMetrics {
    double hp = 0.0;
    double hr = 0.0;
    double hf = 0.0;
    std::size_t empty_predictions = 0; // samples contributing nothing to the sums
};

/// Set-overlap metrics over predicted and true paths including ancestors but
/// excluding the root. Paths are given below the root. Samples with an empty
/// prediction contribute 0 to both the intersection and |P'| sums and are
/// counted in empty_predictions.
inline HierMetrics hier_metrics(const std::vector<PredictionPath>& predicted,
                                const std::vector<std::vector<std::string>>& truth,
                                const LabelTree& tree, double beta = 1.0) {
    if (predicted.size() != truth.size())
        throw invalid_input("hier_metrics: prediction/truth length mismatch");
    if (!(beta > 0.0)) throw invalid_input("hier_metrics: beta must be positive");

    double inter_sum = 0.0, pred_sum = 0.0, true_sum = 0.0;
    HierMetrics out;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!tree.valid_path_below_root(predicted[i].labels))
            throw invalid_input("hier_metrics: predicted path not in tree");
        if (!tree.valid_path_below_root(truth[i]))
            throw invalid_input("hier_metrics: true path not in tree");
        if (predicted[i].labels.empty()) ++out.empty_predictions;

        const std::set<std::string> p(predicted[i].labels.begin(), predicted[i].labels.end());
        const std::set<std::string> t(truth[i].begin(), truth[i].end());
        for (const auto& n : p)
            if (t.count(n)) inter_sum += 1.0;
        pred_sum += static_cast<double>(p.size());
        true_sum += static_cast<double>(t.size());
    }

    out.hp = pred_sum > 0.0 ? inter_sum / pred_sum : 0.0;
    out.hr = true_sum > 0.0 ? inter_sum / true_sum : 0.0;
    const double b2 = beta * beta;
    out.hf = (b2 * out.hp + out.hr) > 0.0 ? (b2 + 1.0) * out.hp * out.hr / (b2 * out.hp + out.hr) : 0.0;
    return out;
}

/// Same metrics with every path truncated to at most `level` steps below the
/// root; level 1 scores only the first split.
inline HierMetrics hier_metrics_at_level(const std::vector<PredictionPath>& predicted,
                                         const std::vector<std::vector<std::string>>& truth,
                                         const LabelTree& tree, std::size_t level, double beta = 1.0) {
    std::vector<PredictionPath> pred_cut(predicted.size());
    std::vector<std::vector<std::string>> true_cut(truth.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto n = std::min(level, predicted[i].labels.size());
        pred_cut[i].labels.assign(predicted[i].labels.begin(), predicted[i].labels.begin() + static_cast<std::ptrdiff_t>(n));
        const auto m = std::min(level, truth[i].size());
        true_cut[i].assign(truth[i].begin(), truth[i].begin() + static_cast<std::ptrdiff_t>(m));
    }
    return hier_metrics(pred_cut, true_cut, tree, beta);
}

// ---- cascade serialization ----

inline void cascade_save(const HierarchyCascade& cascade, const std::string& path) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = "hierarchy_cascade";
    j["confidence_floor"] = cascade.confidence_floor;
    std::vector<std::vector<std::string>> edges;
    std::vector<std::string> stack{cascade.tree.root};
    while (!stack.empty()) {
        const auto node = stack.back();
        stack.pop_back();
        for (const auto& c : cascade.tree.children_of(node)) {
            edges.push_back({node, c});
            stack.push_back(c);
        }
    }
    j["tree_edges"] = edges;
    auto& nodes = j["node_classifiers"];
    nodes = nlohmann::json::object();
    for (const auto& [node, clf] : cascade.node_classifiers) {
        nodes[node] = {{"k", clf.k}, {"features", clf.features}, {"labels", clf.labels}};
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cascade_save: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("cascade_save: short write to " + path);
}

inline HierarchyCascade cascade_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cascade_load: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("cascade_load: bad descriptor JSON: " + std::string(e.what()));
    }
    if (j.value("kind", "") != "hierarchy_cascade")
        throw format_error("cascade_load: kind field is not 'hierarchy_cascade'");
    if (j.value("format_version", 0) != 1) throw format_error("cascade_load: unsupported format_version");

    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j.at("tree_edges"))
        edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());

    HierarchyCascade cascade;
    cascade.tree = make_label_tree(edges);
    cascade.confidence_floor = j.at("confidence_floor").get<double>();
    for (const auto& [node, jc] : j.at("node_classifiers").items()) {
        KnnClassifier clf;
        clf.k = jc.at("k").get<int>();
        clf.features = jc.at("features").get<std::vector<std::vector<double>>>();
        clf.labels = jc.at("labels").get<std::vector<std::string>>();
        cascade.node_classifiers.emplace(node, std::move(clf));
    }
    return cascade;
}

} // namespace rffp
