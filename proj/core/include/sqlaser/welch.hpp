#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace sqlaser {

// Segmentation plan for Welch averaging. Segment length is the largest power
// of two such that at least `target_segments + 1` half-overlapped segments
// fit; every segment that fits is computed, the first is discarded as
// warm-up, and the rest enter the average. The frequency grid is the DFT
// grid of one segment at the (possibly decimated) sample interval.
struct WelchPlan {
    std::size_t segment_length = 0;
    std::size_t hop = 0;
    std::size_t n_segments_total = 0;
    std::size_t n_segments_used = 0;
    double sample_interval = 0.0;

    static WelchPlan create(std::size_t n_samples, std::size_t target_segments,
                            double sample_interval);

    // omega_j = 2*pi*j / (segment_length * sample_interval), j = 0 .. len/2.
    std::vector<double> omega_grid() const;
    std::size_t n_bins() const { return segment_length / 2 + 1; }
};

enum class Window { hann, hamming, boxcar };

Window window_from_name(std::string_view name);
const char* window_name(Window w);
std::vector<double> make_window(Window w, std::size_t length);

// In-place radix-2 FFT (length must be a power of two). Hand-rolled so the
// estimator is bit-identical across platforms and library versions.
void fft_pow2(std::vector<std::complex<double>>& data);

// Welch cross-spectrum estimator over a fixed set of three channels (the
// state components of the simulated model). Trajectories are added in order
// and segments are reduced in (trajectory, segment) order, so the result is
// independent of any parallel scheduling upstream.
//
// The estimate is the two-sided spectral density in angular frequency: for
// a process with <v(t) v(t')^T> correlations, mean(i,j,bin) converges to
// S_ij(omega_bin) with S(omega) = Integral <v(0) v(tau)^T> e^{i omega tau}
// d tau (co-spectrum, i.e. real part, for i != j).
class CrossSpectrumEstimator {
public:
    static constexpr int kChannels = 3;

    CrossSpectrumEstimator(const WelchPlan& plan, Window window);

    // One trajectory's samples, one contiguous array per channel, each of
    // length plan.n_samples (or longer; only the planned span is read).
    void add_trajectory(const std::array<const double*, 3>& channels,
                        std::size_t n_samples);

    const WelchPlan& plan() const { return plan_; }
    std::size_t segments_accumulated() const { return count_; }

    // Averaged co-spectrum and its standard error for channel pair (i, j).
    std::vector<double> mean(int i, int j) const;
    std::vector<double> standard_error(int i, int j) const;

private:
    void add_segment(const std::array<const double*, 3>& channels,
                     std::size_t offset);

    WelchPlan plan_;
    Window window_kind_;
    std::vector<double> window_;
    double window_power_;         // sum of squared taper samples
    double overlap_inflation_;    // variance inflation from 50% overlap
    std::vector<std::complex<double>> scratch_[3];
    // Welford accumulators per pair (i <= j) per bin.
    std::array<std::vector<double>, 6> mean_;
    std::array<std::vector<double>, 6> m2_;
    std::size_t count_ = 0;

    static int pair_index(int i, int j);
};

}  // namespace sqlaser
