#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "skperlin/analysis.hpp"
#include "skperlin/smoothing.hpp"

using namespace skperlin;

namespace {

constexpr double kPi = 3.14159265358979323846;

// O(T^2) direct-sum DFT, the oracle the fast path is checked against.
std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) /
                               static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> fold(const std::vector<std::complex<double>>& spec) {
    const std::size_t n = spec.size();
    const std::size_t half = n / 2;
    std::vector<double> p(half + 1, 0.0);
    p[0] = std::norm(spec[0]);
    for (std::size_t k = 1; k < half; ++k) p[k] = std::norm(spec[k]) + std::norm(spec[n - k]);
    if (n % 2 == 0)
        p[half] = std::norm(spec[half]);
    else
        p[half] = std::norm(spec[half]) + std::norm(spec[n - half]);
    return p;
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    std::vector<double> x(n);
    detail::SplitMix s(seed);
    for (double& v : x) v = s.next_gaussian();
    return x;
}

NoiseField gaussian_field(std::size_t frames, double sigma, std::uint64_t seed) {
    SmoothingStrategy strat;
    strat.kind = GaussianStrategy{sigma};
    return make_baseline_field(strat, frames, 24, 60.0, seed);
}

}  // namespace

TEST_CASE("constant signal concentrates all power at DC") {
    const double c = 0.8;
    const std::size_t T = 64;
    const PsdResult spec = psd({std::vector<double>(T, c)}, 60.0);
    CHECK(spec.power[0][0] == Catch::Approx(c * T * c * T).epsilon(1e-12));
    for (std::size_t k = 1; k < spec.power[0].size(); ++k)
        CHECK(spec.power[0][k] <= 1e-18 * spec.power[0][0]);
    CHECK(spec.freqs.back() == Catch::Approx(30.0).margin(1e-12));
}

TEST_CASE("a pure 3 Hz sinusoid lands in one bin") {
    const std::size_t T = 600;
    const double fps = 60.0;
    std::vector<double> x(T);
    for (std::size_t t = 0; t < T; ++t) x[t] = std::sin(2.0 * kPi * 3.0 * t / fps);
    const PsdResult spec = psd({x}, fps);
    const std::size_t bin = 3 * T / 60;  // 3 Hz at df = 0.1 Hz
    CHECK(spec.freqs[bin] == Catch::Approx(3.0).margin(1e-12));
    double total = 0.0;
    for (std::size_t k = 1; k < spec.power[0].size(); ++k) total += spec.power[0][k];
    CHECK(spec.power[0][bin] / total >= 0.999);
}

TEST_CASE("periodogram matches the direct DFT oracle") {
    for (std::size_t T : {512u, 600u, 601u}) {  // power of two, composite, odd
        const auto x = random_signal(T, 1000 + T);
        const PsdResult spec = psd({x}, 60.0);
        const auto want = fold(direct_dft(x));
        REQUIRE(spec.power[0].size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k) {
            const double scale = std::max(1.0, std::abs(want[k]));
            CHECK(std::abs(spec.power[0][k] - want[k]) / scale <= 1e-9);
        }
    }
}

TEST_CASE("Parseval consistency of the folded periodogram") {
    for (std::size_t T : {128u, 600u, 601u}) {
        const auto x = random_signal(T, 7 + T);
        const PsdResult spec = psd({x}, 60.0);
        double lhs = 0.0;
        for (double p : spec.power[0]) lhs += p;
        double rhs = 0.0;
        for (double v : x) rhs += v * v;
        rhs *= static_cast<double>(T);
        CHECK(std::abs(lhs - rhs) / rhs <= 1e-6);
    }
}

TEST_CASE("psd validates input") {
    CHECK_THROWS_AS(psd({std::vector<double>(4, 0.0)}, 60.0), std::invalid_argument);
    CHECK_THROWS_AS(psd(std::vector<std::vector<double>>{}, 60.0), std::invalid_argument);
    std::vector<double> bad(16, 0.0);
    bad[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(psd({bad}, 60.0), std::invalid_argument);
}

TEST_CASE("low_freq_ratio splits band power") {
    const std::size_t T = 600;
    const double fps = 60.0;
    std::vector<double> low(T), high(T);
    for (std::size_t t = 0; t < T; ++t) {
        low[t] = std::sin(2.0 * kPi * 3.0 * t / fps);
        high[t] = std::sin(2.0 * kPi * 20.0 * t / fps);
    }
    CHECK(low_freq_ratio(psd({low}, fps), 5.0) >= 0.99);
    CHECK(low_freq_ratio(psd({high}, fps), 5.0) <= 0.01);
}

TEST_CASE("low_freq_ratio of an iid field approaches the band fraction") {
    double mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        mean += low_freq_ratio(psd(gaussian_field(3600, 0.07, seed)), 5.0);
    mean /= 3.0;
    CHECK(mean == Catch::Approx(5.0 / 30.0).margin(0.03));
}

TEST_CASE("low_freq_ratio is monotone in the cutoff") {
    const PsdResult spec = psd(gaussian_field(512, 0.05, 4));
    double prev = 0.0;
    for (double fc : {2.0, 5.0, 10.0, 20.0, 30.0}) {
        const double r = low_freq_ratio(spec, fc);
        CHECK(r >= prev);
        prev = r;
    }
    CHECK(prev == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("low_freq_ratio of silence is an undefined-ratio error") {
    const PsdResult spec = psd({std::vector<double>(64, 1.0)}, 60.0);
    CHECK_THROWS_AS(low_freq_ratio(spec, 5.0), UndefinedRatioError);
    CHECK_THROWS_AS(low_freq_ratio(spec, -1.0), std::invalid_argument);
}

TEST_CASE("spectral_slope recovers exact power laws") {
    PsdResult spec;
    spec.fps = 60.0;
    const std::size_t T = 600;
    spec.freqs.resize(T / 2 + 1);
    spec.power.resize(1);
    spec.power[0].resize(T / 2 + 1);
    for (std::size_t k = 0; k <= T / 2; ++k) {
        spec.freqs[k] = static_cast<double>(k) * 60.0 / T;
        spec.power[0][k] = k == 0 ? 0.0 : 1.0 / (spec.freqs[k] * spec.freqs[k]);
    }
    CHECK(spectral_slope(spec, 0.5, 5.0) == Catch::Approx(2.0).margin(1e-9));
    for (std::size_t k = 1; k <= T / 2; ++k) spec.power[0][k] = 3.7;
    CHECK(spectral_slope(spec, 0.5, 5.0) == Catch::Approx(0.0).margin(1e-9));
    CHECK_THROWS_AS(spectral_slope(spec, 0.5, 0.7), std::invalid_argument);  // too few bins
    CHECK_THROWS_AS(spectral_slope(spec, 5.0, 0.5), std::invalid_argument);
}

TEST_CASE("max_rate measures the per-second step norm") {
    MotionSequence seq(4, 2, 60.0);
    CHECK(max_rate(seq) == 0.0);
    seq.at(2, 1, 3) = 0.1;
    CHECK(max_rate(seq) == Catch::Approx(6.0).margin(1e-12));
    MotionSequence one(1, 2, 60.0);
    CHECK_THROWS_AS(max_rate(one), std::invalid_argument);
}

TEST_CASE("chain_correlation is exactly one within chains at zero offset weight") {
    const SkeletonConfig sk = default_skeleton();
    PerlinParams pp;
    pp.seed = 3;
    pp.offset_weight = 0.0;
    const NoiseField f = sk_perlin(pp, sk, 256, 60.0);
    const ChainCorrelation cc = chain_correlation(f, sk);
    CHECK(cc.intra == 1.0);
}

TEST_CASE("chain_correlation of iid noise is near zero") {
    const SkeletonConfig sk = default_skeleton();
    const NoiseField f = gaussian_field(6000, 0.07, 11);
    const ChainCorrelation cc = chain_correlation(f, sk);
    CHECK(std::abs(cc.intra) <= 0.05);
    CHECK(std::abs(cc.inter) <= 0.05);
}

TEST_CASE("chain_correlation excludes constant traces") {
    const SkeletonConfig sk = default_skeleton();
    NoiseField f = gaussian_field(128, 0.07, 12);
    for (std::size_t t = 0; t < f.frames; ++t)
        for (std::size_t c = 0; c < f.channels; ++c) f.at(t, 5, c) = 0.25;
    const ChainCorrelation cc = chain_correlation(f, sk);
    CHECK(cc.skipped_pairs == 23);
}

TEST_CASE("entropy of canonical distributions") {
    std::vector<double> uniform(1000000);
    detail::SplitMix s(21);
    for (double& v : uniform) v = s.next_unit();
    const EntropyResult hu = entropy_estimate(uniform, 64);
    CHECK_FALSE(hu.degenerate);
    CHECK(hu.nats == Catch::Approx(0.0).margin(0.02));

    std::vector<double> gauss(1000000);
    for (double& v : gauss) v = s.next_gaussian();
    const EntropyResult hg = entropy_estimate(gauss, 64);
    CHECK(hg.nats == Catch::Approx(0.5 * std::log(2.0 * kPi * std::exp(1.0))).margin(0.05));

    const std::vector<double> flat(2000, 3.0);
    const EntropyResult hd = entropy_estimate(flat, 64);
    CHECK(hd.degenerate);
    CHECK(hd.nats == -std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(entropy_estimate(std::vector<double>(10, 0.0), 64), std::invalid_argument);
    CHECK_THROWS_AS(entropy_estimate(uniform, 4), std::invalid_argument);
}

TEST_CASE("entropy is shift invariant") {
    std::vector<double> samples(1000000);
    detail::SplitMix s(22);
    for (double& v : samples) v = s.next_unit();
    const double h0 = entropy_estimate(samples, 64).nats;
    for (double& v : samples) v += 1000.0;
    const double h1 = entropy_estimate(samples, 64).nats;
    CHECK(std::abs(h0 - h1) <= 1e-9);
}

TEST_CASE("iid rate grows with sigma while the structured field obeys its bound") {
    // expectation over 10 seeds, monotone over sigma
    double prev = 0.0;
    for (double sigma : {0.01, 0.05, 0.1}) {
        double mean = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
            mean += max_rate(gaussian_field(256, sigma, seed));
        mean /= 10.0;
        CHECK(mean > prev);
        prev = mean;
    }

    const SkeletonConfig sk = default_skeleton();
    const double g = measure_base_gradient(1, 50000);
    for (double sb : {0.03, 0.07, 0.11}) {
        PerlinParams pp;
        pp.base_scale = sb;
        pp.seed = 31;
        const NoiseField f = sk_perlin(pp, sk, 600, 60.0);
        CHECK(max_rate(f) <= gradient_bound(pp, g) * 1.05);
    }
}

TEST_CASE("property report on a constant sequence") {
    MotionSequence seq(600, 24, 60.0);
    for (std::size_t t = 0; t < seq.frames; ++t)
        for (std::size_t j = 0; j < 24; ++j) seq.set_joint_r6d(t, j, t_pose_r6d());
    const PropertyReport rep = property_report(seq, default_skeleton(), PropertyThresholds::defaults());
    CHECK(rep.rate_max == 0.0);
    CHECK(rep.rate_ok);
    CHECK_FALSE(rep.ratio_error.empty());
    CHECK_FALSE(rep.passed());
}

TEST_CASE("property report separates structured noise from iid noise") {
    const SkeletonConfig sk = default_skeleton();
    const PropertyThresholds th = PropertyThresholds::defaults();

    PerlinParams pp;
    pp.seed = 1;
    const PropertyReport good = property_report(sk_perlin(pp, sk, 1200, 60.0), sk, th);
    CHECK(good.ratio_ok);
    CHECK(good.chain_ok);
    CHECK(good.rate_ok);
    CHECK(good.passed());

    const PropertyReport bad = property_report(gaussian_field(1200, 0.07, 2), sk, th);
    CHECK(bad.ratio == Catch::Approx(5.0 / 30.0).margin(0.03));
    CHECK_FALSE(bad.ratio_ok);
    CHECK_FALSE(bad.passed());
}

TEST_CASE("default rate bound comes from the synthetic corpus") {
    const double m = default_rate_bound();
    CHECK(m > 0.0);
    // every corpus sequence passes its own calibrated bound
    for (const MotionSequence& seq : synth_corpus()) CHECK(max_rate(seq) <= m * 10.0);
}
