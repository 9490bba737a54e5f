#include "sqlaser/spectral_curve.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sqlaser/core_model.hpp"

namespace sqlaser {

void SpectralCurve::validate() const
{
    if (omega.empty()) {
        throw EmptyGrid("spectral curve has no samples");
    }
    if (omega.size() != value.size()) {
        throw InvalidParameter("omega and value arrays differ in length");
    }
    for (std::size_t i = 1; i < omega.size(); ++i) {
        if (!(omega[i] > omega[i - 1])) {
            throw InvalidParameter("frequency grid must be strictly increasing");
        }
    }
}

std::vector<double> linear_grid(double omega_min, double omega_max,
                                std::size_t points)
{
    if (points == 0) {
        throw EmptyGrid("requested a grid with zero points");
    }
    if (points == 1) {
        if (omega_min != omega_max) {
            throw InvalidParameter("a single-point grid needs omega_min == omega_max");
        }
        return {omega_min};
    }
    if (!(omega_max > omega_min)) {
        throw InvalidParameter("omega_max must exceed omega_min");
    }
    std::vector<double> grid(points);
    const double step = (omega_max - omega_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = omega_min + step * static_cast<double>(i);
    }
    grid.back() = omega_max;  // avoid accumulated rounding at the endpoint
    return grid;
}

std::vector<double> log_symmetric_grid(double omega_min, double omega_max,
                                       std::size_t points_per_side,
                                       bool include_zero)
{
    if (points_per_side == 0) {
        throw EmptyGrid("requested a grid with zero points");
    }
    if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
        throw InvalidParameter("need 0 < omega_min < omega_max for a log grid");
    }
    std::vector<double> positive(points_per_side);
    if (points_per_side == 1) {
        positive[0] = omega_min;
    } else {
        const double lmin = std::log(omega_min);
        const double lstep = (std::log(omega_max) - lmin) /
                             static_cast<double>(points_per_side - 1);
        for (std::size_t i = 0; i < points_per_side; ++i) {
            positive[i] = std::exp(lmin + lstep * static_cast<double>(i));
        }
        positive.back() = omega_max;
    }
    std::vector<double> grid;
    grid.reserve(2 * points_per_side + 1);
    for (std::size_t i = points_per_side; i-- > 0;) {
        grid.push_back(-positive[i]);
    }
    if (include_zero) grid.push_back(0.0);
    grid.insert(grid.end(), positive.begin(), positive.end());
    return grid;
}

std::vector<double> default_grid(const OperatingPoint& op,
                                 std::size_t points_per_decade)
{
    if (points_per_decade < 16) points_per_decade = 16;
    const double kappa = op.params.kappa;
    const double narrow = op.mu > 0.0 ? 0.5 * kappa * op.mu : 1.0e-3 * kappa;
    const double lo = narrow / 10.0;
    const double hi = 10.0 * kappa;
    const double decades = std::log10(hi / lo);
    const auto per_side = static_cast<std::size_t>(
        std::ceil(decades * static_cast<double>(points_per_decade))) + 1;
    return log_symmetric_grid(lo, hi, per_side, true);
}

void curve_to_csv(const SpectralCurve& curve, std::ostream& out)
{
    curve.validate();
    out << "omega,value\n";
    char line[64];
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::snprintf(line, sizeof line, "%.16e,%.16e\n", curve.omega[i],
                      curve.value[i]);
        out << line;
    }
}

std::string curve_to_csv(const SpectralCurve& curve)
{
    std::ostringstream os;
    curve_to_csv(curve, os);
    return os.str();
}

SpectralCurve curve_from_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "omega,value") {
        throw ConfigError("expected CSV header 'omega,value'");
    }
    SpectralCurve curve;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double w = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &w, &v) != 2) {
            throw ConfigError("malformed CSV row: " + line);
        }
        curve.omega.push_back(w);
        curve.value.push_back(v);
    }
    curve.validate();
    return curve;
}

}  // namespace sqlaser
