#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>
#include <vector>

#include "checks.hpp"
#include "sqlaser/errors.hpp"
#include "sqlaser/rng.hpp"
#include "sqlaser/welch.hpp"

using namespace sqlaser;

TEST_CASE("segmentation plan") {
    const WelchPlan plan = WelchPlan::create(1000, 8, 0.1);
    CHECK(plan.segment_length == 128);
    CHECK(plan.hop == 64);
    CHECK(plan.n_segments_total == 14);
    CHECK(plan.n_segments_used == 13);  // first segment is warm-up
    CHECK(plan.n_bins() == 65);

    const auto grid = plan.omega_grid();
    REQUIRE(grid.size() == 65);
    CHECK(grid[0] == 0.0);
    CHECK(rel_dev(grid[1], 2.0 * std::numbers::pi / 12.8) < 1e-14);
    CHECK(rel_dev(grid.back(), std::numbers::pi / 0.1) < 1e-14);

    CHECK_THROWS_AS(WelchPlan::create(1000, 7, 0.1), InvalidParameter);
    CHECK_THROWS_AS(WelchPlan::create(50, 8, 0.1), InvalidParameter);
    CHECK_THROWS_AS(WelchPlan::create(1000, 8, 0.0), InvalidParameter);
}

TEST_CASE("window families") {
    CHECK(window_from_name("hann") == Window::hann);
    CHECK(window_from_name("hamming") == Window::hamming);
    CHECK(window_from_name("boxcar") == Window::boxcar);
    CHECK(window_from_name("rectangular") == Window::boxcar);
    CHECK_THROWS_AS(window_from_name("kaiser"), InvalidParameter);
    CHECK(std::string(window_name(Window::hann)) == "hann");

    // Periodic forms have exact power sums over a full period.
    const std::size_t len = 256;
    for (auto [w, sum, power] :
         {std::tuple{Window::hann, 0.5 * len, 0.375 * len},
          std::tuple{Window::hamming, 0.54 * len,
                     (0.54 * 0.54 + 0.5 * 0.46 * 0.46) * len},
          std::tuple{Window::boxcar, 1.0 * len, 1.0 * len}}) {
        const auto taper = make_window(w, len);
        REQUIRE(taper.size() == len);
        double s = 0.0, p = 0.0;
        for (double v : taper) {
            s += v;
            p += v * v;
        }
        CHECK(rel_dev(s, sum) < 1e-12);
        CHECK(rel_dev(p, power) < 1e-12);
    }
}

TEST_CASE("radix-2 FFT against the direct transform") {
    const std::size_t n = 64;
    Xoshiro256pp rng(12345u);
    std::vector<std::complex<double>> data(n);
    for (auto& v : data)
        v = {rng.uniform_symmetric(), rng.uniform_symmetric()};
    const auto input = data;

    fft_pow2(data);

    for (std::size_t k = 0; k < n; k += 7) {
        std::complex<double> direct = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double phase =
                -2.0 * std::numbers::pi * double(j * k) / double(n);
            direct += input[j] * std::polar(1.0, phase);
        }
        CHECK(std::abs(data[k] - direct) < 1e-11);
    }

    // Parseval: sum |X_k|^2 = n * sum |x_j|^2.
    double in_power = 0.0, out_power = 0.0;
    for (const auto& v : input) in_power += std::norm(v);
    for (const auto& v : data) out_power += std::norm(v);
    CHECK(rel_dev(out_power, double(n) * in_power) < 1e-12);

    std::vector<std::complex<double>> odd(3);
    CHECK_THROWS_AS(fft_pow2(odd), InvalidParameter);
}

namespace {

struct OuChannel {
    double a;  // decay rate
    double d;  // white-noise strength
};

// Exactly sampled Ornstein-Uhlenbeck channels. The sampled sequence is an
// AR(1) process whose spectrum the estimator should reproduce without bias:
//   S_d(omega) = sigma_d^2 dt / |1 - phi e^{-i omega dt}|^2,  phi = e^{-a dt}.
double ar1_spectrum(const OuChannel& ch, double dt, double omega) {
    const double phi = std::exp(-ch.a * dt);
    const double sigma2 = ch.d / (2.0 * ch.a) * (1.0 - phi * phi);
    const double c = std::cos(omega * dt);
    return sigma2 * dt / (1.0 - 2.0 * phi * c + phi * phi);
}

}  // namespace

TEST_CASE("estimator calibration on exactly sampled decay channels") {
    const double dt = 0.05;
    const std::size_t n = 13056;
    const WelchPlan plan = WelchPlan::create(n, 64, dt);
    REQUIRE(plan.segment_length == 256);
    REQUIRE(plan.n_segments_used == 100);

    const std::array<OuChannel, 3> channels = {
        {{1.5, 1.0}, {2.5, 2.0}, {4.0, 4.0}}};

    CrossSpectrumEstimator est(plan, Window::hann);
    SplitMix64 splitter(911u);
    const int n_traj = 4;
    for (int t = 0; t < n_traj; ++t) {
        NormalSampler gauss(splitter.next());
        std::array<std::vector<double>, 3> series;
        for (int c = 0; c < 3; ++c) {
            const double phi = std::exp(-channels[c].a * dt);
            const double step_sd = std::sqrt(channels[c].d /
                                             (2.0 * channels[c].a) *
                                             (1.0 - phi * phi));
            auto& v = series[c];
            v.resize(n);
            v[0] = std::sqrt(channels[c].d / (2.0 * channels[c].a)) *
                   gauss.next();
            for (std::size_t k = 1; k < n; ++k)
                v[k] = phi * v[k - 1] + step_sd * gauss.next();
        }
        est.add_trajectory(
            {series[0].data(), series[1].data(), series[2].data()}, n);
    }
    CHECK(est.segments_accumulated() == 100 * n_traj);

    const auto grid = plan.omega_grid();
    for (int c = 0; c < 3; ++c) {
        const auto mean = est.mean(c, c);
        const auto se = est.standard_error(c, c);
        int outliers = 0;
        double zz = 0.0, zsum = 0.0;
        for (std::size_t j = 1; j < grid.size(); ++j) {  // DC is nulled
            const double truth = ar1_spectrum(channels[c], dt, grid[j]);
            const double z = (mean[j] - truth) / se[j];
            if (std::abs(z) > 3.0) ++outliers;
            zz += z * z;
            zsum += z;
        }
        const double bins = double(grid.size() - 1);
        CHECK(outliers <= 3);                      // ~0.3% expected at 3 sigma
        CHECK(std::sqrt(zz / bins) > 0.6);         // error bars not inflated
        CHECK(std::sqrt(zz / bins) < 1.5);         // nor understated
        CHECK(std::abs(zsum / bins) < 0.4);        // no systematic bias
    }

    // Independent channels: cross-spectra are pure noise around zero.
    for (auto [i, j] :
         std::array{std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        const auto cross = est.mean(i, j);
        const auto se = est.standard_error(i, j);
        CHECK(cross == est.mean(j, i));
        int outliers = 0;
        for (std::size_t k = 1; k < cross.size(); ++k)
            if (std::abs(cross[k]) > 4.0 * se[k]) ++outliers;
        CHECK(outliers == 0);
    }
}

TEST_CASE("white sequence has flat spectrum dt with nulled dc bin") {
    const double dt = 0.25;
    const std::size_t n = 4224;
    const WelchPlan plan = WelchPlan::create(n, 30, dt);
    CrossSpectrumEstimator est(plan, Window::hann);

    NormalSampler gauss(4242u);
    std::array<std::vector<double>, 3> series;
    for (auto& v : series) {
        v.resize(n);
        for (auto& x : v) x = gauss.next();
    }
    est.add_trajectory({series[0].data(), series[1].data(), series[2].data()},
                       n);

    const auto mean = est.mean(0, 0);
    const auto se = est.standard_error(0, 0);
    // Per-segment mean removal suppresses the DC bin far below the flat level.
    CHECK(mean[0] < 0.5 * dt);
    for (std::size_t j = 1; j < mean.size(); ++j)
        CHECK(std::abs(mean[j] - dt) <= 5.0 * se[j]);
}

TEST_CASE("trajectory must cover the planned span") {
    const WelchPlan plan = WelchPlan::create(1000, 8, 0.1);
    CrossSpectrumEstimator est(plan, Window::hann);
    // The plan spans 128 + 13 * 64 = 960 samples; one fewer must throw.
    std::vector<double> too_short(959, 0.0);
    CHECK_THROWS_AS(
        est.add_trajectory({too_short.data(), too_short.data(),
                            too_short.data()},
                           too_short.size()),
        InvalidParameter);
}
