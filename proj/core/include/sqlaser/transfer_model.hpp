#pragma once

#include <Eigen/Dense>

#include "sqlaser/core_model.hpp"

namespace sqlaser {

// Symmetrized white-noise covariance of the Langevin forces driving the
// linearized state (dx, dy, dN1): <xi_i(t) xi_j(t')> = sigma_ij delta(t-t').
// Under the symmetric Fourier convention these strengths coincide with the
// spectral densities of the forces:
//   sigma_xx = sigma_yy = kappa/2 (1 - mu/2)
//   sigma_xN = -kappa/2 (1 - mu) sqrt(n)
//   sigma_NN = kappa (1 - mu) Gamma1 (2 - p) / c
// All cross terms involving dy vanish after symmetrization.
struct NoiseCovariance {
    Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();

    static NoiseCovariance for_operating_point(const OperatingPoint& op);

    double min_eigenvalue() const;
};

// Cholesky-like lower-triangular factor L with L L^T = m for a symmetric
// positive semidefinite matrix; exact zero modes are tolerated. Throws
// NotPositiveSemidefinite when m has a negative eigenvalue beyond roundoff.
Eigen::Matrix3d semidefinite_cholesky(const Eigen::Matrix3d& m,
                                      const char* what);

// Linear drift of the fluctuations around the locked steady state:
//   d(dx)/dt  = -(kappa mu/2) dx                + (c sqrt(n)/2) dN1
//   d(dy)/dt  =               -(kappa mu/2) dy
//   d(dN1)/dt = -2 kappa (1-mu) sqrt(n) dx      - Gamma1 dN1
// The y quadrature decouples; its decay rate kappa*mu/2 is the locking
// half-width and vanishes for the free-running laser.
struct TransferModel {
    Eigen::Matrix3d drift = Eigen::Matrix3d::Zero();
    NoiseCovariance noise;

    static TransferModel for_operating_point(const OperatingPoint& op);

    Eigen::Vector3cd eigenvalues() const;
    double spectral_radius() const;     // max |eigenvalue|
    double slowest_decay_rate() const;  // min |Re(eigenvalue)|
    bool stable() const;                // all Re(eigenvalue) < 0
};

// Stationary covariance C of the fluctuations, solved from the continuous
// Lyapunov equation  drift C + C drift^T + sigma = 0.
// Throws UnstableDrift when the drift has a non-decaying mode.
Eigen::Matrix3d stationary_covariance(const TransferModel& model);
Eigen::Matrix3d stationary_covariance(const OperatingPoint& op);

}  // namespace sqlaser
