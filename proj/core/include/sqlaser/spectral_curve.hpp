#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqlaser/errors.hpp"

namespace sqlaser {

// A real-valued spectral density sampled on a strictly increasing frequency
// grid. omega is an angular frequency in the same inverse-time unit as the
// laser rates; value keeps whatever normalization the producing formula has.
struct SpectralCurve {
    std::vector<double> omega;
    std::vector<double> value;

    std::size_t size() const { return omega.size(); }

    // Throws EmptyGrid / InvalidParameter when the grid is empty, the two
    // arrays disagree in length, or omega is not strictly increasing.
    void validate() const;
};

// Uniform grid with `points` samples. points >= 2 requires omega_max >
// omega_min; points == 1 returns {omega_min} and requires equality.
std::vector<double> linear_grid(double omega_min, double omega_max,
                                std::size_t points);

// Symmetric logarithmic grid: points_per_side log-spaced samples in
// [omega_min, omega_max] mirrored to negative frequencies, optionally with
// omega = 0 in the middle. Requires 0 < omega_min < omega_max.
std::vector<double> log_symmetric_grid(double omega_min, double omega_max,
                                       std::size_t points_per_side,
                                       bool include_zero = true);

struct OperatingPoint;

// Grid resolving both characteristic widths of the locked laser, the locking
// line kappa*mu/2 and the cavity line kappa, with at least
// points_per_decade samples per decade (16 by default, the pinned minimum).
std::vector<double> default_grid(const OperatingPoint& op,
                                 std::size_t points_per_decade = 16);

// CSV with the exact header "omega,value" and 17 significant digits in
// scientific notation, one "omega,value" row per sample, '\n' line endings.
void curve_to_csv(const SpectralCurve& curve, std::ostream& out);
std::string curve_to_csv(const SpectralCurve& curve);
SpectralCurve curve_from_csv(std::istream& in);

// JSON array of [omega, value] pairs.
std::string curve_to_json(const SpectralCurve& curve);

}  // namespace sqlaser
