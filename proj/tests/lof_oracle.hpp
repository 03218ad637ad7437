#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rffp/lof.hpp"

namespace testutil {

/// Independent O(n^2) evaluation of the four LOF steps, recomputed from raw
/// pairwise distances for every call. Shares only the tie and infinity
/// conventions with the implementation under test.
struct LofOracle {
    std::vector<std::vector<double>> pts;
    int k;
    rffp::LofMetric metric;

    double dist(const std::vector<double>& a, const std::vector<double>& b) const {
        double d = 0.0;
        switch (metric) {
            case rffp::LofMetric::manhattan:
                for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
                return d;
            case rffp::LofMetric::euclidean:
                for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
                return std::sqrt(d);
            case rffp::LofMetric::cosine: {
                double dot = 0.0, na = 0.0, nb = 0.0;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    dot += a[i] * b[i];
                    na += a[i] * a[i];
                    nb += b[i] * b[i];
                }
                return (na == 0.0 || nb == 0.0) ? 1.0 : 1.0 - dot / std::sqrt(na * nb);
            }
        }
        return 0.0;
    }

    // step 1: distance to the k-th nearest reference, self excluded for members
    double kdistance(const std::vector<double>& p, long self) const {
        std::vector<double> ds;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (static_cast<long>(j) == self) continue;
            ds.push_back(dist(p, pts[j]));
        }
        std::sort(ds.begin(), ds.end());
        return ds[static_cast<std::size_t>(k - 1)];
    }

    std::vector<std::size_t> neighborhood(const std::vector<double>& p, long self) const {
        const double kd = kdistance(p, self);
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (static_cast<long>(j) == self) continue;
            if (dist(p, pts[j]) <= kd) out.push_back(j);
        }
        return out;
    }

    // steps 2+3: reachability distances, then local reachability density
    double lrd(const std::vector<double>& p, long self) const {
        const auto hood = neighborhood(p, self);
        double sum = 0.0;
        for (auto o : hood)
            sum += std::max(kdistance(pts[o], static_cast<long>(o)), dist(p, pts[o]));
        return sum == 0.0 ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(hood.size()) / sum;
    }

    // step 4: mean lrd ratio over the neighborhood
    double score(const std::vector<double>& q) const {
        const auto hood = neighborhood(q, -1);
        const double lq = lrd(q, -1);
        double acc = 0.0;
        for (auto o : hood) {
            const double lo = lrd(pts[o], static_cast<long>(o));
            if (std::isinf(lo) && std::isinf(lq)) acc += 1.0;
            else if (std::isinf(lq)) acc += 0.0;
            else if (std::isinf(lo)) acc += std::numeric_limits<double>::infinity();
            else acc += lo / lq;
        }
        return acc / static_cast<double>(hood.size());
    }
};

} // namespace testutil
