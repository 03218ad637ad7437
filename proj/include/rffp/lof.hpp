#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rffp/errors.hpp"

namespace rffp {

enum class LofMetric { manhattan, euclidean, cosine };

inline const char* to_string(LofMetric m) {
    switch (m) {
        case LofMetric::manhattan: return "manhattan";
        case LofMetric::euclidean: return "euclidean";
        case LofMetric::cosine: return "cosine";
    }
    return "?";
}

inline LofMetric lof_metric_from_string(const std::string& s) {
    if (s == "manhattan") return LofMetric::manhattan;
    if (s == "euclidean") return LofMetric::euclidean;
    if (s == "cosine") return LofMetric::cosine;
    throw invalid_input("unknown LOF metric: " + s);
}

/// Cosine distance treats a zero vector as distance 1 to everything.
inline double lof_distance(const std::vector<double>& a, const std::vector<double>& b, LofMetric metric) {
    switch (metric) {
        case LofMetric::manhattan: {
            double d = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
            return d;
        }
        case LofMetric::euclidean: {
            double d = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(d);
        }
        case LofMetric::cosine: {
            double dot = 0.0, na = 0.0, nb = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dot += a[i] * b[i];
                na += a[i] * a[i];
                nb += b[i] * b[i];
            }
            if (na == 0.0 || nb == 0.0) return 1.0;
            return 1.0 - dot / std::sqrt(na * nb);
        }
    }
    return 0.0;
}

/// Novelty-mode local outlier factor: queries are scored against the fitted
/// reference population and never joined to it. The k-neighborhood contains
/// every point within the k-distance, so exact ties make it larger than k.
/// Coincident-point degeneracies follow the infinite-lrd convention: a zero
/// reachability sum gives lrd = +inf, inf/inf ratios count as 1 and
/// finite/inf as 0.
struct LofModel {
    std::vector<std::vector<double>> points;
    int k = 20;
    LofMetric metric = LofMetric::manhattan;
    double threshold = 1.0;
    std::vector<double> kdist; // per reference point
    std::vector<double> lrd;   // per reference point, may be +inf

    std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

namespace detail {

/// k-th smallest distance and the indices within it (ties included).
inline void kdistance_neighborhood(const std::vector<double>& dists, int k,
                                   double& kdist, std::vector<std::size_t>& neighborhood) {
    std::vector<double> sorted(dists);
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    kdist = sorted[static_cast<std::size_t>(k - 1)];
    neighborhood.clear();
    for (std::size_t j = 0; j < dists.size(); ++j)
        if (dists[j] <= kdist) neighborhood.push_back(j);
}

inline double lrd_from(const std::vector<double>& dists, const std::vector<std::size_t>& neighborhood,
                       const std::vector<double>& ref_kdist) {
    double sum = 0.0;
    for (auto o : neighborhood) sum += std::max(ref_kdist[o], dists[o]);
    if (sum == 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(neighborhood.size()) / sum;
}

inline double lrd_ratio(double lrd_o, double lrd_p) {
    const bool inf_o = std::isinf(lrd_o);
    const bool inf_p = std::isinf(lrd_p);
    if (inf_o && inf_p) return 1.0;
    if (inf_p) return 0.0;
    if (inf_o) return std::numeric_limits<double>::infinity();
    return lrd_o / lrd_p;
}

} // namespace detail

/// Stores the reference points and precomputes each one's k-distance and
/// local reachability density by exhaustive pairwise distances.
inline LofModel lof_fit(const std::vector<std::vector<double>>& points, int k,
                        LofMetric metric = LofMetric::manhattan, double threshold = 1.0) {
    if (k < 1) throw invalid_input("lof_fit: k must be >= 1");
    if (points.size() < static_cast<std::size_t>(k) + 1)
        throw invalid_input("lof_fit: need at least k+1 reference points");
    const std::size_t dim = points.front().size();
    if (dim == 0) throw invalid_input("lof_fit: empty point dimension");
    for (const auto& p : points) {
        if (p.size() != dim) throw invalid_input("lof_fit: inconsistent point dimension");
        for (double v : p)
            if (!std::isfinite(v)) throw invalid_input("lof_fit: non-finite reference point");
    }

    LofModel model;
    model.points = points;
    model.k = k;
    model.metric = metric;
    model.threshold = threshold;

    const std::size_t n = points.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = lof_distance(points[i], points[j], metric);

    model.kdist.resize(n);
    std::vector<std::vector<std::size_t>> hoods(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> others;
        others.reserve(n - 1);
        std::vector<std::size_t> ids;
        ids.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            others.push_back(dist[i][j]);
            ids.push_back(j);
        }
        double kd = 0.0;
        std::vector<std::size_t> local;
        detail::kdistance_neighborhood(others, k, kd, local);
        model.kdist[i] = kd;
        for (auto idx : local) hoods[i].push_back(ids[idx]);
    }

    model.lrd.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (auto o : hoods[i]) sum += std::max(model.kdist[o], dist[i][o]);
        model.lrd[i] = sum == 0.0 ? std::numeric_limits<double>::infinity()
                                  : static_cast<double>(hoods[i].size()) / sum;
    }
    return model;
}

/// LOF score of a query against the reference population: the mean ratio of
/// the neighbors' lrd to the query's own lrd. About 1 means similar density,
/// above 1 lower density (outlier side), below 1 higher density.
inline double lof_score(const LofModel& model, const std::vector<double>& query) {
    if (query.size() != model.dimension()) throw invalid_input("lof_score: dimension mismatch");
    for (double v : query)
        if (!std::isfinite(v)) throw invalid_input("lof_score: non-finite query");

    const std::size_t n = model.points.size();
    std::vector<double> dists(n);
    for (std::size_t j = 0; j < n; ++j) dists[j] = lof_distance(query, model.points[j], model.metric);

    double kdist_q = 0.0;
    std::vector<std::size_t> hood;
    detail::kdistance_neighborhood(dists, model.k, kdist_q, hood);
    const double lrd_q = detail::lrd_from(dists, hood, model.kdist);

    double acc = 0.0;
    for (auto o : hood) acc += detail::lrd_ratio(model.lrd[o], lrd_q);
    return acc / static_cast<double>(hood.size());
}

struct LofDecision {
    bool outlier = false;
    double score = 0.0;
};

/// Outlier iff the score strictly exceeds the threshold.
inline LofDecision lof_classify(const LofModel& model, const std::vector<double>& query) {
    LofDecision d;
    d.score = lof_score(model, query);
    d.outlier = d.score > model.threshold;
    return d;
}

// ---- serialization ----

static_assert(std::endian::native == std::endian::little,
              "model blobs are little-endian; big-endian hosts need byte swaps");

inline void lof_save(const LofModel& model, const std::string& path) {
    namespace fs = std::filesystem;
    const fs::path blob = fs::path(path).concat(".bin");
    std::ofstream out(blob, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("lof_save: cannot open " + blob.string());
    for (const auto& p : model.points)
        out.write(reinterpret_cast<const char*>(p.data()),
                  static_cast<std::streamsize>(sizeof(double) * p.size()));
    if (!out) throw io_error("lof_save: short write to " + blob.string());
    out.close();

    nlohmann::json j;
    j["format_version"] = 1;
    j["kind"] = "lof";
    j["k"] = model.k;
    j["metric"] = to_string(model.metric);
    j["threshold"] = model.threshold;
    j["dimension"] = model.dimension();
    j["count"] = model.points.size();
    j["points_blob"] = blob.filename().string();

    std::ofstream desc(path, std::ios::trunc);
    if (!desc) throw io_error("lof_save: cannot open " + path);
    desc << j.dump(2) << '\n';
    if (!desc) throw io_error("lof_save: short write to " + path);
}

inline LofModel lof_load(const std::string& path) {
    namespace fs = std::filesystem;
    std::ifstream desc(path);
    if (!desc) throw io_error("lof_load: cannot open " + path);
    nlohmann::json j;
    try {
        desc >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error("lof_load: bad descriptor JSON: " + std::string(e.what()));
    }
    if (j.value("kind", "") != "lof") throw format_error("lof_load: kind field is not 'lof'");
    if (j.value("format_version", 0) != 1) throw format_error("lof_load: unsupported format_version");

    const auto dim = j.at("dimension").get<std::size_t>();
    const auto count = j.at("count").get<std::size_t>();
    const fs::path blob = fs::path(path).parent_path() / j.at("points_blob").get<std::string>();
    std::ifstream in(blob, std::ios::binary);
    if (!in) throw io_error("lof_load: cannot open " + blob.string());
    std::vector<std::vector<double>> points(count, std::vector<double>(dim));
    for (auto& p : points)
        if (!in.read(reinterpret_cast<char*>(p.data()),
                     static_cast<std::streamsize>(sizeof(double) * dim)))
            throw format_error("lof_load: point matrix truncated");

    return lof_fit(points, j.at("k").get<int>(), lof_metric_from_string(j.at("metric").get<std::string>()),
                   j.at("threshold").get<double>());
}

} // namespace rffp
