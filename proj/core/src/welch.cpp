#include "sqlaser/welch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sqlaser/errors.hpp"

namespace sqlaser {

namespace {

std::size_t floor_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p * 2 <= n) p *= 2;
    return p;
}

}  // namespace

WelchPlan WelchPlan::create(std::size_t n_samples, std::size_t target_segments,
                            double sample_interval) {
    if (target_segments < 8) {
        throw InvalidParameter("n_segments must be at least 8");
    }
    if (!(sample_interval > 0.0)) {
        throw InvalidParameter("sample interval must be positive");
    }
    // At least target + 1 segments at 50% overlap, plus one warm-up:
    // n_samples >= len + (target + 1) * len / 2.
    const std::size_t cap = 2 * n_samples / (target_segments + 3);
    const std::size_t len = floor_pow2(cap);
    if (len < 16) {
        std::ostringstream msg;
        msg << "series too short for Welch averaging: " << n_samples
            << " samples cannot host " << target_segments
            << " overlapped segments of a useful length";
        throw InvalidParameter(msg.str());
    }
    WelchPlan plan;
    plan.segment_length = len;
    plan.hop = len / 2;
    plan.n_segments_total = (n_samples - len) / plan.hop + 1;
    plan.n_segments_used = plan.n_segments_total - 1;
    plan.sample_interval = sample_interval;
    return plan;
}

std::vector<double> WelchPlan::omega_grid() const {
    std::vector<double> omega(n_bins());
    const double step = 2.0 * std::numbers::pi /
                        (static_cast<double>(segment_length) * sample_interval);
    for (std::size_t j = 0; j < omega.size(); ++j)
        omega[j] = step * static_cast<double>(j);
    return omega;
}

Window window_from_name(std::string_view name) {
    if (name == "hann") return Window::hann;
    if (name == "hamming") return Window::hamming;
    if (name == "boxcar" || name == "rectangular") return Window::boxcar;
    throw InvalidParameter("unknown window '" + std::string(name) +
                           "' (expected hann, hamming, or boxcar)");
}

const char* window_name(Window w) {
    switch (w) {
        case Window::hann: return "hann";
        case Window::hamming: return "hamming";
        case Window::boxcar: return "boxcar";
    }
    return "?";
}

std::vector<double> make_window(Window w, std::size_t length) {
    std::vector<double> taper(length, 1.0);
    // DFT-even (periodic) forms, the right choice for spectral averaging.
    const double step = 2.0 * std::numbers::pi / static_cast<double>(length);
    switch (w) {
        case Window::hann:
            for (std::size_t n = 0; n < length; ++n)
                taper[n] = 0.5 - 0.5 * std::cos(step * static_cast<double>(n));
            break;
        case Window::hamming:
            for (std::size_t n = 0; n < length; ++n)
                taper[n] =
                    0.54 - 0.46 * std::cos(step * static_cast<double>(n));
            break;
        case Window::boxcar:
            break;
    }
    return taper;
}

void fft_pow2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw InvalidParameter("FFT length must be a power of two");
    }
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle =
            -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wstep(std::cos(angle), std::sin(angle));
        for (std::size_t start = 0; start < n; start += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[start + k];
                const std::complex<double> v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
                w *= wstep;
            }
        }
    }
}

int CrossSpectrumEstimator::pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    // (0,0) (0,1) (0,2) (1,1) (1,2) (2,2)
    static constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][j];
}

CrossSpectrumEstimator::CrossSpectrumEstimator(const WelchPlan& plan,
                                               Window window)
    : plan_(plan),
      window_kind_(window),
      window_(make_window(window, plan.segment_length)) {
    window_power_ = 0.0;
    double overlap_power = 0.0;
    for (std::size_t n = 0; n < window_.size(); ++n) {
        window_power_ += window_[n] * window_[n];
        overlap_power +=
            window_[n] * window_[(n + plan_.hop) % window_.size()];
    }
    // Periodograms of half-overlapped segments are correlated with
    // coefficient rho = (sum w_n w_{n+hop} / sum w_n^2)^2 (1/9 for Hann,
    // 1/4 for boxcar). The standard error reported below inflates the naive
    // independent-segment estimate accordingly.
    const double rho_amp = overlap_power / window_power_;
    const double rho = rho_amp * rho_amp;
    const double k = static_cast<double>(plan_.n_segments_used);
    overlap_inflation_ = 1.0 + 2.0 * rho * (k - 1.0) / k;
    for (auto& s : scratch_) s.resize(plan_.segment_length);
    for (auto& m : mean_) m.assign(plan_.n_bins(), 0.0);
    for (auto& m : m2_) m.assign(plan_.n_bins(), 0.0);
}

void CrossSpectrumEstimator::add_trajectory(
    const std::array<const double*, 3>& channels, std::size_t n_samples) {
    const std::size_t need =
        plan_.segment_length + (plan_.n_segments_total - 1) * plan_.hop;
    if (n_samples < need) {
        std::ostringstream msg;
        msg << "trajectory has " << n_samples << " samples but the plan needs "
            << need;
        throw InvalidParameter(msg.str());
    }
    // Segment 0 is the warm-up and is skipped.
    for (std::size_t s = 1; s < plan_.n_segments_total; ++s) {
        add_segment(channels, s * plan_.hop);
    }
}

void CrossSpectrumEstimator::add_segment(
    const std::array<const double*, 3>& channels, std::size_t offset) {
    const std::size_t len = plan_.segment_length;
    for (int c = 0; c < kChannels; ++c) {
        const double* src = channels[static_cast<std::size_t>(c)] + offset;
        double mean = 0.0;
        for (std::size_t n = 0; n < len; ++n) mean += src[n];
        mean /= static_cast<double>(len);
        auto& buf = scratch_[c];
        for (std::size_t n = 0; n < len; ++n)
            buf[n] = std::complex<double>((src[n] - mean) * window_[n], 0.0);
        fft_pow2(buf);
    }

    // P_ij(bin) = dt / sum(w^2) * Re(conj(X_i) X_j) estimates the two-sided
    // co-spectrum at omega_bin.
    const double scale = plan_.sample_interval / window_power_;
    count_ += 1;
    const double inv_count = 1.0 / static_cast<double>(count_);
    for (int i = 0; i < kChannels; ++i) {
        for (int j = i; j < kChannels; ++j) {
            const int p = pair_index(i, j);
            auto& mean = mean_[static_cast<std::size_t>(p)];
            auto& m2 = m2_[static_cast<std::size_t>(p)];
            const auto& xi = scratch_[i];
            const auto& xj = scratch_[j];
            for (std::size_t k = 0; k < plan_.n_bins(); ++k) {
                const double value =
                    scale * (std::conj(xi[k]) * xj[k]).real();
                const double delta = value - mean[k];
                mean[k] += delta * inv_count;
                m2[k] += delta * (value - mean[k]);
            }
        }
    }
}

std::vector<double> CrossSpectrumEstimator::mean(int i, int j) const {
    return mean_[static_cast<std::size_t>(pair_index(i, j))];
}

std::vector<double> CrossSpectrumEstimator::standard_error(int i,
                                                           int j) const {
    const auto& m2 = m2_[static_cast<std::size_t>(pair_index(i, j))];
    std::vector<double> se(m2.size(), 0.0);
    if (count_ < 2) return se;
    const double n = static_cast<double>(count_);
    for (std::size_t k = 0; k < se.size(); ++k) {
        se[k] = std::sqrt(overlap_inflation_ * m2[k] / ((n - 1.0) * n));
    }
    return se;
}

}  // namespace sqlaser
