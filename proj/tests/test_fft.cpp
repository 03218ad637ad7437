#include <catch2/catch_amalgamated.hpp>

#include "rffp/fft.hpp"
#include "rffp/rng.hpp"

#include "test_util.hpp"

using rffp::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::uint64_t seed) {
    rffp::Rng rng(seed);
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(rng.gaussian(), rng.gaussian());
    return x;
}

double max_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("fft matches the naive DFT on power-of-2 and odd lengths", "[fft]") {
    for (std::size_t n : {2u, 8u, 64u, 256u, 3u, 5u, 12u, 100u, 1000u}) {
        const auto x = random_complex(n, 1000 + n);
        const auto got = rffp::fft(x);
        const auto want = testutil::naive_dft(x);
        INFO("n = " << n);
        REQUIRE(max_err(got, want) < 1e-8 * static_cast<double>(n));
    }
}

TEST_CASE("ifft inverts fft", "[fft]") {
    for (std::size_t n : {4u, 17u, 128u, 1024u, 1000u}) {
        const auto x = random_complex(n, 7 + n);
        const auto back = rffp::ifft(rffp::fft(x));
        INFO("n = " << n);
        REQUIRE(max_err(back, x) < 1e-10);
    }
}

TEST_CASE("fft of a pure tone concentrates on its bin", "[fft]") {
    const std::size_t n = 512;
    const auto s = testutil::sinusoid(n, 10.0 / static_cast<double>(n));
    const auto spec = rffp::fft_real(s.samples);
    std::size_t best = 0;
    for (std::size_t k = 1; k <= n / 2; ++k)
        if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
    REQUIRE(best == 10);
}
