#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sqlaser/core_model.hpp"
#include "sqlaser/spectral_curve.hpp"
#include "sqlaser/transfer_model.hpp"
#include "sqlaser/welch.hpp"

namespace sqlaser {

// Monte-Carlo integration of the linearized Langevin system
//   dv = A v dt + dW,   <dW dW^T> = Sigma dt,
// with Welch-estimated spectra of all state-component pairs. For a fixed
// seed the result is bit-identical run to run: trajectories use seed-split
// generator streams and are reduced in trajectory-then-segment order.
struct SimConfig {
    enum class Integrator { euler_maruyama, exact };

    double dt = 0.0;
    double duration = 0.0;
    std::size_t n_segments = 64;
    std::string window = "hann";
    std::uint64_t seed = 1;
    std::size_t n_trajectories = 1;
    // Raw steps averaged per recorded sample (boxcar decimation). 0 picks
    // the largest stride keeping the decimated Nyquist rate at least 64
    // times the fastest drift eigenrate; the boxcar response is divided out
    // of the estimated spectra either way.
    std::size_t record_stride = 0;
    Integrator integrator = Integrator::euler_maruyama;

    void validate() const;
};

SimConfig sim_config_from_json(const std::string& text);
std::string sim_config_to_json(const SimConfig& cfg);

struct SimResult {
    std::vector<double> omega;
    // Co-spectrum estimates and standard errors, indexed (x, y, N) x (x, y, N).
    std::array<std::array<std::vector<double>, 3>, 3> estimated;
    std::array<std::array<std::vector<double>, 3>, 3> standard_error;
    SimConfig config;
    WelchPlan plan;
    std::size_t record_stride = 1;
    std::size_t steps_per_trajectory = 0;
    double wall_time_seconds = 0.0;

    SpectralCurve curve(int i, int j) const;
    SpectralCurve error_curve(int i, int j) const;
};

// Simulate the laser model at an operating point. Enforces, beyond the
// generic guards of simulate_model, that the run is long enough to resolve
// the locking line: duration >= 50 * 2*pi/(kappa*mu).
SimResult simulate(const OperatingPoint& op, const SimConfig& cfg);

// Simulate an arbitrary stable 3-state model (used by the estimator
// self-tests with decoupled oscillators).
SimResult simulate_model(const TransferModel& model, const SimConfig& cfg);

// Raw trajectory access for convergence and decay tests: integrates from a
// given initial state and returns every step (no decimation, no spectra).
std::vector<std::array<double, 3>> integrate_path(
    const TransferModel& model, const std::array<double, 3>& initial,
    double dt, std::size_t n_steps, SimConfig::Integrator integrator,
    std::uint64_t seed);

}  // namespace sqlaser
