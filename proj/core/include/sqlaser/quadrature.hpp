#pragma once

#include <functional>

#include "sqlaser/errors.hpp"

namespace sqlaser {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b] to the given absolute tolerance.
// Deterministic: the subdivision order depends only on the integrand values.
QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_subdivisions = 4000);

// Integral over the whole real line via omega = scale * t / (1 - t^2),
// t in (-1, 1). scale should match the width of the integrand's central
// feature; the adaptive refinement does the rest.
QuadratureResult integrate_real_line(const std::function<double(double)>& f,
                                     double scale, double abs_tol,
                                     int max_subdivisions = 4000);

// Throws QuadratureNonConvergence with diagnostics unless r.converged.
const QuadratureResult& require_converged(const QuadratureResult& r,
                                          const char* what);

}  // namespace sqlaser
