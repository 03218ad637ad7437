#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "rffp/hht.hpp"

#include "test_util.hpp"

using namespace rffp;
using testutil::make_signal;

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b,
               std::size_t lo, std::size_t hi) {
    double ma = 0.0, mb = 0.0;
    const double n = static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double num = 0.0, da = 0.0, db = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

std::size_t zero_crossings(const std::vector<double>& x) {
    std::size_t zc = 0;
    double prev = 0.0;
    bool have = false;
    for (double v : x) {
        if (v == 0.0) continue;
        if (have && (prev < 0.0) != (v < 0.0)) ++zc;
        prev = v;
        have = true;
    }
    return zc;
}

/// Direct circular convolution with the periodic Hilbert kernel for even N:
/// h[j] = (2/N) cot(pi j / N) for odd j, 0 for even j.
std::vector<double> hilbert_kernel_oracle(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> h(n, 0.0);
    for (std::size_t j = 1; j < n; j += 2)
        h[j] = 2.0 / (static_cast<double>(n) * std::tan(M_PI * static_cast<double>(j) / static_cast<double>(n)));
    std::vector<double> out(n, 0.0);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t m = 0; m < n; ++m)
            out[t] += x[m] * h[(t + n - m) % n];
    return out;
}

} // namespace

TEST_CASE("a monotone ramp yields no IMFs", "[hht]") {
    std::vector<double> ramp(100);
    std::iota(ramp.begin(), ramp.end(), 1.0);
    const auto res = emd(make_signal(ramp));
    REQUIRE(res.imfs.empty());
    REQUIRE(res.residual == ramp);
}

TEST_CASE("emd separates a 5 Hz + 50 Hz mixture", "[hht]") {
    const std::size_t n = 1000; // 1 s at 1 kHz
    std::vector<double> lo(n), hi(n), sum(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double tt = static_cast<double>(t) / 1000.0;
        lo[t] = std::sin(2.0 * M_PI * 5.0 * tt);
        hi[t] = std::sin(2.0 * M_PI * 50.0 * tt);
        sum[t] = lo[t] + hi[t];
    }
    auto s = make_signal(sum, 1000.0);
    const auto res = emd(s);
    REQUIRE(res.imfs.size() >= 2);
    const double corr = pearson(res.imfs[0], hi, n / 10, n - n / 10);
    INFO("imf1 vs 50 Hz correlation " << corr);
    REQUIRE(corr > 0.95);
}

TEST_CASE("imfs plus residual reconstruct the input", "[hht]") {
    for (std::size_t n : {64u, 256u, 1024u}) {
        const auto s = testutil::random_signal(n, 42 + n);
        const auto res = emd(s);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = res.residual[i];
            for (const auto& imf : res.imfs) acc += imf[i];
            num += (acc - s.samples[i]) * (acc - s.samples[i]);
            den += s.samples[i] * s.samples[i];
        }
        REQUIRE(std::sqrt(num / den) < 1e-8);
    }
}

TEST_CASE("every returned IMF balances extrema and zero crossings", "[hht]") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto s = testutil::random_signal(512, seed);
        const auto res = emd(s);
        for (const auto& imf : res.imfs) {
            std::vector<std::size_t> maxima, minima;
            rffp::detail::find_extrema(imf, maxima, minima);
            const auto ext = maxima.size() + minima.size();
            const auto zc = zero_crossings(imf);
            const auto diff = ext > zc ? ext - zc : zc - ext;
            INFO("seed " << seed << " extrema " << ext << " zero crossings " << zc);
            REQUIRE(diff <= 1);
        }
    }
}

TEST_CASE("imf zero-crossing rates are ordered high to low", "[hht]") {
    const std::size_t n = 1000;
    std::vector<double> sum(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double tt = static_cast<double>(t) / 1000.0;
        sum[t] = std::sin(2.0 * M_PI * 5.0 * tt) + std::sin(2.0 * M_PI * 50.0 * tt);
    }
    const auto res = emd(make_signal(sum, 1000.0));
    REQUIRE(res.imfs.size() >= 2);
    for (std::size_t i = 0; i + 1 < res.imfs.size(); ++i)
        REQUIRE(zero_crossings(res.imfs[i]) >= zero_crossings(res.imfs[i + 1]));
}

TEST_CASE("hilbert of zero is zero", "[hht]") {
    const auto a = hilbert_analytic(std::vector<double>(64, 0.0));
    for (double v : a.amplitude) REQUIRE(v == 0.0);
    for (double v : a.energy) REQUIRE(v == 0.0);
}

TEST_CASE("hilbert recovers amplitude and frequency of a cosine", "[hht]") {
    const std::size_t n = 2048;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = std::cos(2.0 * M_PI * 0.05 * static_cast<double>(t));
    const auto a = hilbert_analytic(x);

    const std::size_t lo = n / 10, hi = n - n / 10;
    for (std::size_t i = lo; i < hi; ++i)
        REQUIRE(a.amplitude[i] == Catch::Approx(1.0).epsilon(0.02));

    double mean_if = 0.0;
    for (std::size_t i = lo; i + 1 < hi; ++i) mean_if += a.phase[i + 1] - a.phase[i];
    mean_if /= (2.0 * M_PI * static_cast<double>(hi - 1 - lo));
    REQUIRE(mean_if == Catch::Approx(0.05).epsilon(0.01));
}

TEST_CASE("hilbert scales linearly with non-negative gain", "[hht]") {
    const auto s = testutil::random_signal(256, 77);
    const double c = 2.5;
    auto scaled = s.samples;
    for (auto& v : scaled) v *= c;
    const auto a = hilbert_analytic(s.samples);
    const auto b = hilbert_analytic(scaled);
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        REQUIRE(b.amplitude[i] == Catch::Approx(c * a.amplitude[i]).margin(1e-10));
        REQUIRE(b.energy[i] == Catch::Approx(c * c * a.energy[i]).margin(1e-9));
    }
}

TEST_CASE("hilbert matches the time-domain cotangent kernel oracle", "[hht]") {
    const auto s = testutil::random_signal(256, 123);
    const auto a = hilbert_analytic(s.samples);
    const auto want = hilbert_kernel_oracle(s.samples);

    // Recover H{x} as the imaginary part of the analytic signal.
    auto spec = fft_real(s.samples);
    const std::size_t n = s.samples.size();
    for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (std::size_t k = n / 2 + 1; k < n; ++k) spec[k] = cplx(0.0, 0.0);
    const auto z = ifft(std::move(spec));

    double scale = 0.0;
    for (double v : want) scale = std::max(scale, std::abs(v));
    for (std::size_t i = n / 10; i < n - n / 10; ++i)
        REQUIRE(std::abs(z[i].imag() - want[i]) <= 1e-6 * scale);
    (void)a;
}

TEST_CASE("hht_features is a deterministic 26-vector", "[hht]") {
    const auto s = testutil::random_signal(512, 55);
    const auto f1 = hht_features(s);
    const auto f2 = hht_features(s);
    REQUIRE(f1.size() == 26);
    REQUIRE(f1.values == f2.values);
    REQUIRE(f1.names == f2.names);
    REQUIRE(f1.names[0] == "imf1_mean");
    REQUIRE(f1.names[13] == "imf2_mean");
}

TEST_CASE("hht_features of the zero signal follows the substitution policy", "[hht]") {
    const auto f = hht_features(make_signal(std::vector<double>(64, 0.0)));
    REQUIRE(f.size() == 26);
    for (std::size_t i = 0; i < f.size(); ++i) {
        REQUIRE(f.values[i] == 0.0);
        REQUIRE(f.flags[i]); // substituted IMFs flag every statistic
    }
}
