#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rffp/wavelet.hpp"

#include "test_util.hpp"

using namespace rffp;
using testutil::energy;
using testutil::make_signal;

TEST_CASE("haar_dwt hand examples", "[wavelet]") {
    const double r2 = std::sqrt(2.0);

    const auto a = haar_dwt(make_signal({1, 1, 1, 1}));
    REQUIRE(a.approx.size() == 2);
    REQUIRE(a.approx[0] == Catch::Approx(r2).margin(1e-14));
    REQUIRE(a.approx[1] == Catch::Approx(r2).margin(1e-14));
    REQUIRE(a.detail[0] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(a.detail[1] == Catch::Approx(0.0).margin(1e-14));

    const auto b = haar_dwt(make_signal({3, 1}));
    REQUIRE(b.approx[0] == Catch::Approx(2.0 * r2).margin(1e-14));
    REQUIRE(b.detail[0] == Catch::Approx(r2).margin(1e-14));
    REQUIRE(energy(b.approx) + energy(b.detail) == Catch::Approx(10.0).margin(1e-12));

    const auto c = haar_dwt(make_signal({1, -1}));
    REQUIRE(c.approx[0] == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(c.detail[0] == Catch::Approx(r2).margin(1e-14));

    REQUIRE_THROWS_AS(haar_dwt(make_signal({1})), invalid_input);
}

TEST_CASE("haar round trip is identity within 1e-12", "[wavelet]") {
    const auto x = make_signal({5, 2, -3, 7});
    const auto back = haar_idwt(haar_dwt(x));
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE(std::abs(back.samples[i] - x.samples[i]) < 1e-12);

    for (std::size_t n : {4u, 64u, 1024u}) {
        const auto r = testutil::random_signal(n, 100 + n, 3.0);
        const auto rb = haar_idwt(haar_dwt(r));
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(std::abs(rb.samples[i] - r.samples[i]) < 1e-12);
    }
}

TEST_CASE("haar_idwt reconstructs the stated examples", "[wavelet]") {
    const double r2 = std::sqrt(2.0);
    const auto a = haar_idwt({{r2, r2}, {0, 0}, false});
    for (double v : a.samples) REQUIRE(v == Catch::Approx(1.0).margin(1e-14));
    const auto b = haar_idwt({{0}, {r2}, false});
    REQUIRE(b.samples[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(b.samples[1] == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE_THROWS_AS(haar_idwt({{1, 2}, {1}, false}), invalid_input);
}

TEST_CASE("haar drops and flags an odd tail", "[wavelet]") {
    const auto d = haar_dwt(make_signal({1, 2, 3, 4, 5}));
    REQUIRE(d.approx.size() == 2);
    REQUIRE(d.odd_tail_dropped);
    const auto e = haar_dwt(make_signal({1, 2, 3, 4}));
    REQUIRE(!e.odd_tail_dropped);
}

TEST_CASE("wpt_two_level hand-computed packets of [1,2,3,4]", "[wavelet]") {
    const auto p = wpt_two_level(make_signal({1, 2, 3, 4}));
    REQUIRE(p.aa.size() == 1);
    REQUIRE(p.aa[0] == Catch::Approx(5.0).margin(1e-12));
    REQUIRE(p.ad[0] == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(p.da[0] == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(p.dd[0] == Catch::Approx(0.0).margin(1e-12));
    const double packet_energy = energy(p.aa) + energy(p.ad) + energy(p.da) + energy(p.dd);
    REQUIRE(packet_energy == Catch::Approx(30.0).margin(1e-12));
}

TEST_CASE("wpt of a constant concentrates in aa, zero stays zero", "[wavelet]") {
    const auto p = wpt_two_level(make_signal(std::vector<double>(8, 2.5)));
    REQUIRE(energy(p.ad) == Catch::Approx(0.0).margin(1e-20));
    REQUIRE(energy(p.da) == Catch::Approx(0.0).margin(1e-20));
    REQUIRE(energy(p.dd) == Catch::Approx(0.0).margin(1e-20));
    REQUIRE(energy(p.aa) == Catch::Approx(8 * 2.5 * 2.5).margin(1e-10));

    const auto z = wpt_two_level(make_signal(std::vector<double>(8, 0.0)));
    REQUIRE(energy(z.aa) + energy(z.ad) + energy(z.da) + energy(z.dd) == 0.0);

    REQUIRE_THROWS_AS(wpt_two_level(make_signal({1, 2, 3})), invalid_input);
}

TEST_CASE("haar and wpt conserve energy on random signals", "[wavelet]") {
    for (std::size_t n : {4u, 64u, 1024u}) {
        const auto s = testutil::random_signal(n, 555 + n, 2.0);
        const double in = energy(s.samples);

        const auto d = haar_dwt(s);
        const double haar_out = energy(d.approx) + energy(d.detail);
        REQUIRE(std::abs(haar_out - in) <= 1e-9 * in);

        const auto p = wpt_two_level(s);
        const double wpt_out = energy(p.aa) + energy(p.ad) + energy(p.da) + energy(p.dd);
        REQUIRE(std::abs(wpt_out - in) <= 1e-9 * in);
    }
}
