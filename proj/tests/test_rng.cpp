#include <catch2/catch_amalgamated.hpp>

#include "rffp/rng.hpp"

using rffp::Rng;

TEST_CASE("same seed reproduces the identical stream", "[rng]") {
    Rng a(1234), b(1234);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.uniform01() == b.uniform01());
        REQUIRE(a.gaussian() == b.gaussian());
    }
}

TEST_CASE("uniform01 stays in [0,1) and looks uniform", "[rng]") {
    Rng rng(7);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("gaussian moments", "[rng]") {
    Rng rng(99);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        sum += g;
        sq += g * g;
    }
    REQUIRE(std::abs(sum / n) < 0.02);
    REQUIRE(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("derived seeds differ per stream and index", "[rng]") {
    const auto a = rffp::derive_seed(42, 0, 0);
    const auto b = rffp::derive_seed(42, 0, 1);
    const auto c = rffp::derive_seed(42, 1, 0);
    const auto a2 = rffp::derive_seed(42, 0, 0);
    REQUIRE(a == a2);
    REQUIRE(a != b);
    REQUIRE(a != c);
    REQUIRE(b != c);
}

TEST_CASE("uniform_int covers the range without escapees", "[rng]") {
    Rng rng(5);
    std::vector<int> hits(13, 0);
    for (int i = 0; i < 130000; ++i) {
        const auto v = rng.uniform_int(13);
        REQUIRE(v < 13);
        ++hits[static_cast<std::size_t>(v)];
    }
    for (int h : hits) REQUIRE(h > 8000);
}
