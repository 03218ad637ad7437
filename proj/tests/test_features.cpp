#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rffp/features.hpp"
#include "rffp/signal.hpp"
#include "rffp/synth.hpp"

#include "test_util.hpp"

using namespace rffp;
using testutil::make_signal;

TEST_CASE("wpt_features of the zero signal is 16 flagged-or-zero values", "[features]") {
    const auto packets = wpt_two_level(make_signal(std::vector<double>(64, 0.0)));
    const auto f = wpt_features(packets);
    REQUIRE(f.size() == 16);
    for (double v : f.values) REQUIRE(v == 0.0);
    // entropy of a zero packet is flagged
    for (std::size_t i = 3; i < 16; i += 4) REQUIRE(f.flags[i]);
}

TEST_CASE("wpt_features on the [1,2,3,4] packets", "[features]") {
    const auto f = wpt_features(wpt_two_level(make_signal({1, 2, 3, 4})));
    REQUIRE(f.size() == 16);
    // Single-element packets: std is 0 by convention, variance 0, ptp 0.
    for (std::size_t packet = 0; packet < 4; ++packet) {
        REQUIRE(f.values[packet * 4 + 0] == 0.0);
        REQUIRE(f.flags[packet * 4 + 0]); // N = 1 makes the N-1 form undefined
        REQUIRE(f.values[packet * 4 + 1] == 0.0);
        REQUIRE(f.values[packet * 4 + 2] == 0.0);
    }
    // aa=[5], ad=[-2], da=[-1] are one-hot: entropy 0 unflagged; dd=[0] flagged.
    REQUIRE(f.values[3] == 0.0);
    REQUIRE(!f.flags[3]);
    REQUIRE(f.values[15] == 0.0);
    REQUIRE(f.flags[15]);
    REQUIRE(f.names[0] == "aa_std");
    REQUIRE(f.names[15] == "dd_shannon_entropy");
}

TEST_CASE("assemble_hht_wpt is a frozen 42-vector", "[features]") {
    const auto s = testutil::random_signal(512, 5);
    const auto a = assemble_hht_wpt(s);
    const auto b = assemble_hht_wpt(s);
    REQUIRE(a.size() == 42);
    REQUIRE(a.source == FeatureSource::HHT_WPT42);
    REQUIRE(a.values == b.values);
    REQUIRE(a.names[0] == "imf1_mean");
    REQUIRE(a.names[26] == "aa_std");
    REQUIRE(a.names[41] == "dd_shannon_entropy");
}

TEST_CASE("noise moves features less than a class change does", "[features]") {
    // Median over devices: distance(clean, 30 dB copy) < distance(clean, other class).
    const std::vector<std::vector<std::string>> paths = {
        {"UAS", "Controller", "CtrlA"}, {"UAS", "Controller", "CtrlB"},
        {"UAS", "Vehicle", "VehA"},     {"UAS", "Vehicle", "VehB"}};
    const auto specs = derive_device_specs(paths, 11);

    std::vector<FeatureVector> clean, noisy;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        auto sig = synth_generate(specs[i], 2048, 100 + i);
        Signal steady;
        steady.samples.assign(sig.samples.begin() + 512, sig.samples.begin() + 512 + 1024);
        clean.push_back(assemble_hht_wpt(steady));
        noisy.push_back(assemble_hht_wpt(add_awgn(steady, 30.0, 200 + i)));
    }

    auto dist = [](const FeatureVector& x, const FeatureVector& y) {
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double den = std::max(1.0, std::abs(x.values[i]) + std::abs(y.values[i]));
            const double diff = (x.values[i] - y.values[i]) / den;
            d += diff * diff;
        }
        return std::sqrt(d);
    };

    std::size_t wins = 0, comparisons = 0;
    for (std::size_t i = 0; i < clean.size(); ++i)
        for (std::size_t j = 0; j < clean.size(); ++j) {
            if (i == j) continue;
            ++comparisons;
            if (dist(clean[i], noisy[i]) < dist(clean[i], clean[j])) ++wins;
        }
    INFO(wins << " of " << comparisons);
    REQUIRE(2 * wins > comparisons); // median comparison favors the same device
}
