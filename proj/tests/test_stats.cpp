#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "rffp/rng.hpp"
#include "rffp/stats.hpp"

#include "test_util.hpp"

using namespace rffp;

namespace {

/// Independent evaluation of the 13 statistics, straight from the formulas.
struct OracleStats {
    std::array<double, 13> values{};
    std::array<bool, 13> flags{};
};

double oracle_quantile(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double h = p * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] * (1.0 - (h - static_cast<double>(lo))) + v[lo + 1] * (h - static_cast<double>(lo));
}

OracleStats oracle_stats(const std::vector<double>& x) {
    OracleStats o;
    const double n = static_cast<double>(x.size());

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    o.values[0] = mean;

    bool bad_h = false;
    double hsum = 0.0;
    for (double v : x) {
        if (v <= 0.0) bad_h = true;
        else hsum += 1.0 / v;
    }
    if (bad_h) o.flags[1] = true;
    else o.values[1] = 1.0 / (hsum / n);

    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    double sd = 0.0;
    if (x.size() > 1) {
        sd = std::sqrt(ss / (n - 1.0));
        o.values[2] = sd;
    } else {
        o.flags[2] = true;
    }

    o.values[3] = ss / n;

    if (x.size() > 1 && sd > 0.0) {
        double s4 = 0.0;
        for (double v : x) s4 += std::pow(v - mean, 4.0);
        o.values[4] = s4 / ((n - 1.0) * std::pow(sd, 4.0));
    } else {
        o.flags[4] = true;
    }

    double sq = 0.0;
    for (double v : x) sq += v * v;
    const double rms = std::sqrt(sq / n);
    o.values[5] = rms;

    if (mean != 0.0) o.values[6] = rms / mean;
    else o.flags[6] = true;

    o.values[7] = *std::max_element(x.begin(), x.end());
    o.values[8] = o.values[7] - *std::min_element(x.begin(), x.end());
    o.values[9] = oracle_quantile(x, 0.75) - oracle_quantile(x, 0.25);

    if (sq > 0.0) {
        double h = 0.0;
        for (double v : x) {
            const double p = v * v / sq;
            if (p > 0.0) h += -p * std::log(p);
        }
        o.values[10] = h;
    } else {
        o.flags[10] = true;
    }

    double sum = 0.0;
    for (double v : x) sum += v;
    o.values[11] = sum;

    if (x.size() > 1 && sd > 0.0) {
        double s3 = 0.0;
        for (double v : x) s3 += std::pow(v - mean, 3.0);
        o.values[12] = s3 / ((n - 1.0) * std::pow(sd, 3.0));
    } else {
        o.flags[12] = true;
    }
    return o;
}

} // namespace

TEST_CASE("stat_summary hand examples", "[stats]") {
    const auto a = stat_summary({1, 2, 3, 4});
    REQUIRE(a.values[0] == Catch::Approx(2.5));
    REQUIRE(a.values[1] == Catch::Approx(1.92));
    REQUIRE(a.values[8] == Catch::Approx(3.0));
    REQUIRE(a.values[11] == Catch::Approx(10.0));
    REQUIRE(a.values[5] == Catch::Approx(std::sqrt(7.5)));

    const auto b = stat_summary({2.5, 2.5, 2.5});
    REQUIRE(b.values[2] == 0.0);
    REQUIRE(b.values[3] == 0.0);
    REQUIRE(b.values[4] == 0.0);
    REQUIRE(b.flags[4]);
    REQUIRE(b.values[6] == Catch::Approx(1.0));
    REQUIRE(b.values[8] == 0.0);

    const double r = 1.0 / std::sqrt(2.0);
    const auto c = stat_summary({r, r});
    REQUIRE(c.values[10] == Catch::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("stat_summary matches the direct-formula oracle on random data", "[stats]") {
    rffp::Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.uniform_int(200);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.gaussian() * 3.0 + (trial % 3 == 0 ? 5.0 : 0.0);
        const auto got = stat_summary(x);
        const auto want = oracle_stats(x);
        for (std::size_t i = 0; i < 13; ++i) {
            INFO("trial " << trial << " stat " << got.names[i]);
            REQUIRE(static_cast<bool>(got.flags[i]) == want.flags[i]);
            const double tol = 1e-10 * std::max(1.0, std::abs(want.values[i]));
            REQUIRE(std::abs(got.values[i] - want.values[i]) <= tol);
        }
    }
}

TEST_CASE("entropy extremes: equal magnitudes hit ln N, one-hot hits zero", "[stats]") {
    std::vector<double> equal(16, 0.3);
    for (std::size_t i = 0; i < equal.size(); i += 2) equal[i] = -0.3;
    REQUIRE(stat_summary(equal).values[10] == Catch::Approx(std::log(16.0)).epsilon(1e-12));

    std::vector<double> onehot(16, 0.0);
    onehot[5] = 2.0;
    REQUIRE(stat_summary(onehot).values[10] == 0.0);
}

TEST_CASE("scaling by c leaves shape stats fixed and scales magnitudes", "[stats]") {
    rffp::Rng rng(9);
    std::vector<double> x(64);
    for (auto& v : x) v = rng.gaussian() + 0.5;
    const double c = 3.7;
    std::vector<double> xs(64);
    for (std::size_t i = 0; i < 64; ++i) xs[i] = c * x[i];

    const auto a = stat_summary(x);
    const auto b = stat_summary(xs);
    // shape factor, kurtosis, skewness, entropy unchanged
    for (std::size_t i : {std::size_t{6}, std::size_t{4}, std::size_t{12}, std::size_t{10}})
        REQUIRE(std::abs(a.values[i] - b.values[i]) < 1e-9 * std::max(1.0, std::abs(a.values[i])));
    // mean, std, rms, peak-to-peak scale by c
    for (std::size_t i : {std::size_t{0}, std::size_t{2}, std::size_t{5}, std::size_t{8}})
        REQUIRE(b.values[i] == Catch::Approx(c * a.values[i]).epsilon(1e-9));
    REQUIRE(b.values[3] == Catch::Approx(c * c * a.values[3]).epsilon(1e-9));
}

TEST_CASE("stat_summary rejects an empty series", "[stats]") {
    REQUIRE_THROWS_AS(stat_summary({}), invalid_input);
}
