#include "sqlaser/transfer_model.hpp"

#include <cmath>

namespace sqlaser {

NoiseCovariance NoiseCovariance::for_operating_point(const OperatingPoint& op)
{
    const double kappa = op.params.kappa;
    const double p = op.params.pump_p;
    const double mu = op.mu;
    const double root_n = std::sqrt(op.n);

    NoiseCovariance out;
    Eigen::Matrix3d& s = out.sigma;
    s.setZero();
    s(0, 0) = 0.5 * kappa * (1.0 - 0.5 * mu);
    s(1, 1) = s(0, 0);
    s(0, 2) = s(2, 0) = -0.5 * kappa * (1.0 - mu) * root_n;
    s(2, 2) = kappa * (1.0 - mu) * op.Gamma1 * (2.0 - p) / op.c;

    if (out.min_eigenvalue() < -1.0e-9 * s.norm()) {
        throw NotPositiveSemidefinite(
            "noise covariance has a negative eigenvalue; check pump_p <= 1");
    }
    return out;
}

double NoiseCovariance::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(sigma);
    return solver.eigenvalues().minCoeff();
}

Eigen::Matrix3d semidefinite_cholesky(const Eigen::Matrix3d& m, const char* what)
{
    const double tol = 1.0e-10 * (1.0 + m.norm());
    Eigen::Matrix3d L = Eigen::Matrix3d::Zero();
    for (int j = 0; j < 3; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (d < -tol) {
            throw NotPositiveSemidefinite(std::string(what) +
                                          ": matrix is indefinite");
        }
        L(j, j) = d > 0.0 ? std::sqrt(d) : 0.0;
        for (int i = j + 1; i < 3; ++i) {
            double v = m(i, j);
            for (int k = 0; k < j; ++k) v -= L(i, k) * L(j, k);
            L(i, j) = L(j, j) > 0.0 ? v / L(j, j) : 0.0;
        }
    }
    return L;
}

TransferModel TransferModel::for_operating_point(const OperatingPoint& op)
{
    const double kappa = op.params.kappa;
    const double mu = op.mu;
    const double root_n = std::sqrt(op.n);

    TransferModel model;
    Eigen::Matrix3d& a = model.drift;
    a.setZero();
    a(0, 0) = -0.5 * kappa * mu;
    a(0, 2) = 0.5 * op.c * root_n;
    a(1, 1) = -0.5 * kappa * mu;
    a(2, 0) = -2.0 * kappa * (1.0 - mu) * root_n;
    a(2, 2) = -op.Gamma1;
    model.noise = NoiseCovariance::for_operating_point(op);
    return model;
}

Eigen::Vector3cd TransferModel::eigenvalues() const
{
    return Eigen::EigenSolver<Eigen::Matrix3d>(drift, false).eigenvalues();
}

double TransferModel::spectral_radius() const
{
    return eigenvalues().cwiseAbs().maxCoeff();
}

double TransferModel::slowest_decay_rate() const
{
    return eigenvalues().real().cwiseAbs().minCoeff();
}

bool TransferModel::stable() const
{
    return eigenvalues().real().maxCoeff() < 0.0;
}

Eigen::Matrix3d stationary_covariance(const TransferModel& model)
{
    if (!model.stable()) {
        throw UnstableDrift(
            "drift has a non-decaying mode; no stationary covariance exists");
    }
    // Vectorized Lyapunov equation: (I (x) A + A (x) I) vec(C) = -vec(sigma).
    const Eigen::Matrix3d& a = model.drift;
    Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
    Eigen::Matrix<double, 9, 1> rhs;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int row = 3 * i + j;
            rhs(row) = -model.noise.sigma(i, j);
            for (int k = 0; k < 3; ++k) {
                m(row, 3 * k + j) += a(i, k);
                m(row, 3 * i + k) += a(j, k);
            }
        }
    }
    const Eigen::Matrix<double, 9, 1> sol = m.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix3d c;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) c(i, j) = sol(3 * i + j);
    }
    return 0.5 * (c + c.transpose());
}

Eigen::Matrix3d stationary_covariance(const OperatingPoint& op)
{
    return stationary_covariance(TransferModel::for_operating_point(op));
}

}  // namespace sqlaser
