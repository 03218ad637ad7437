#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rffp/signal.hpp"

#include "test_util.hpp"

using namespace rffp;
using testutil::make_signal;
using testutil::sinusoid;

TEST_CASE("signal_power basics", "[signal]") {
    REQUIRE(signal_power(make_signal({1, -1, 1, -1})) == 1.0);
    REQUIRE(signal_power(make_signal({0, 0, 0})) == 0.0);
    REQUIRE(signal_power(make_signal({3})) == 9.0);
    REQUIRE_THROWS_AS(signal_power(Signal{}), invalid_input);
}

TEST_CASE("add_awgn is deterministic per seed and preserves length", "[signal]") {
    const auto s = sinusoid(4096, 0.07);
    const auto a = add_awgn(s, 10.0, 42);
    const auto b = add_awgn(s, 10.0, 42);
    const auto c = add_awgn(s, 10.0, 43);
    REQUIRE(a.samples == b.samples);
    REQUIRE(a.samples != c.samples);
    REQUIRE(a.samples.size() == s.samples.size());
    REQUIRE(a.snr_db == 10.0);
}

TEST_CASE("add_awgn injects the requested noise power", "[signal]") {
    const std::size_t n = 100000;
    auto s = sinusoid(n, 0.01, std::sqrt(2.0)); // unit power
    REQUIRE(std::abs(signal_power(s) - 1.0) < 1e-3);
    const auto noisy = add_awgn(s, 0.0, 7);
    double noise_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = noisy.samples[i] - s.samples[i];
        noise_power += d * d;
    }
    noise_power /= static_cast<double>(n);
    REQUIRE(std::abs(noise_power - 1.0) < 0.05);
}

TEST_CASE("higher target SNR means higher measured SNR", "[signal]") {
    const auto s = sinusoid(20000, 0.05);
    auto measure = [&](double snr) {
        const auto noisy = add_awgn(s, snr, 11);
        double np = 0.0;
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
            const double d = noisy.samples[i] - s.samples[i];
            np += d * d;
        }
        np /= static_cast<double>(s.samples.size());
        return 10.0 * std::log10(signal_power(s) / np);
    };
    REQUIRE(measure(30.0) > measure(0.0));
}

TEST_CASE("add_awgn empirical SNR tracks the target within half a dB", "[signal]") {
    const std::size_t n = 10000;
    const auto s = sinusoid(n, 0.03);
    const double p = signal_power(s);
    for (double target : {0.0, 10.0, 20.0}) {
        double acc = 0.0;
        const int seeds = 100;
        for (int k = 0; k < seeds; ++k) {
            const auto noisy = add_awgn(s, target, static_cast<std::uint64_t>(k));
            double np = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = noisy.samples[i] - s.samples[i];
                np += d * d;
            }
            acc += 10.0 * std::log10(p / (np / static_cast<double>(n)));
        }
        REQUIRE(std::abs(acc / seeds - target) < 0.5);
    }
}

TEST_CASE("add_awgn rejects zero-power signals", "[signal]") {
    REQUIRE_THROWS_AS(add_awgn(make_signal({0, 0, 0, 0}), 10.0, 1), invalid_input);
}

TEST_CASE("minmax_normalize maps linearly without clamping", "[signal]") {
    const auto a = minmax_normalize(make_signal({2, 4, 6}), 2, 6);
    REQUIRE(a.samples == std::vector<double>{0.0, 0.5, 1.0});
    const auto b = minmax_normalize(make_signal({5, 5}), 0, 10);
    REQUIRE(b.samples == std::vector<double>{0.5, 0.5});
    const auto c = minmax_normalize(make_signal({-1}), 0, 2);
    REQUIRE(c.samples == std::vector<double>{-0.5});
    REQUIRE_THROWS_AS(minmax_normalize(make_signal({1}), 3, 3), invalid_input);
    REQUIRE_THROWS_AS(minmax_normalize(make_signal({1}), 5, 2), invalid_input);
}

TEST_CASE("minmax round trip is exact to 1e-12", "[signal]") {
    const auto s = testutil::random_signal(512, 3, 7.5);
    const auto back = minmax_denormalize(minmax_normalize(s, -20.0, 20.0), -20.0, 20.0);
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        REQUIRE(std::abs(back.samples[i] - s.samples[i]) < 1e-12);
}

TEST_CASE("detect_bursts on silence finds nothing", "[signal]") {
    const auto segs = detect_bursts(make_signal(std::vector<double>(5000, 0.0)), 0.3, 100);
    REQUIRE(segs.empty());
}

TEST_CASE("detect_bursts localizes a burst to within one window", "[signal]") {
    std::vector<double> x(2000, 0.0);
    const auto tone = sinusoid(3000, 0.05);
    x.insert(x.end(), tone.samples.begin(), tone.samples.end());
    const auto segs = detect_bursts(make_signal(x), 0.3, 100, 64);
    REQUIRE(!segs.empty());
    REQUIRE(segs.front().start_index >= 2000 - 64);
    REQUIRE(segs.front().start_index <= 2000 + 64);
    std::size_t steady_count = 0;
    for (const auto& seg : segs)
        if (seg.kind == SegmentKind::steady) ++steady_count;
    REQUIRE(steady_count == 1);
}

TEST_CASE("well separated bursts stay distinct, close ones merge", "[signal]") {
    std::vector<double> x(1000, 0.0);
    const auto tone = sinusoid(1000, 0.05);
    x.insert(x.end(), tone.samples.begin(), tone.samples.end());
    x.insert(x.end(), 2000, 0.0);
    x.insert(x.end(), tone.samples.begin(), tone.samples.end());
    x.insert(x.end(), 500, 0.0);

    auto count_steady = [](const std::vector<BurstSegment>& segs) {
        std::size_t c = 0;
        for (const auto& seg : segs)
            if (seg.kind == SegmentKind::steady) ++c;
        return c;
    };

    REQUIRE(count_steady(detect_bursts(make_signal(x), 0.3, 500, 64)) == 2);
    REQUIRE(count_steady(detect_bursts(make_signal(x), 0.3, 5000, 64)) == 1);
}

TEST_CASE("burst start is stable under 30 dB noise", "[signal]") {
    std::vector<double> x(3000, 0.0);
    const auto tone = sinusoid(4000, 0.04);
    x.insert(x.end(), tone.samples.begin(), tone.samples.end());
    const auto clean = make_signal(x);
    const auto noisy = add_awgn(clean, 30.0, 21);
    const auto a = detect_bursts(clean, 0.3, 100, 64);
    const auto b = detect_bursts(noisy, 0.3, 100, 64);
    REQUIRE(!a.empty());
    REQUIRE(!b.empty());
    const auto da = static_cast<long>(a.front().start_index);
    const auto db = static_cast<long>(b.front().start_index);
    REQUIRE(std::labs(da - db) <= 64);
}

TEST_CASE("slice_steady cuts non-overlapping full slices", "[signal]") {
    const auto s = sinusoid(4000, 0.03);
    REQUIRE(slice_steady(s, {0, 3000, SegmentKind::steady}, 1024).size() == 2);
    REQUIRE(slice_steady(s, {0, 1024, SegmentKind::steady}, 1024).size() == 1);
    REQUIRE(slice_steady(s, {0, 1000, SegmentKind::steady}, 1024).empty());
    const auto one = slice_steady(s, {0, 1024, SegmentKind::steady}, 1024);
    REQUIRE(one.front().samples ==
            std::vector<double>(s.samples.begin(), s.samples.begin() + 1024));
    REQUIRE_THROWS_AS(slice_steady(s, {0, 3000, SegmentKind::transient}, 1024), invalid_input);
}
