#include "sqlaser/spectra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqlaser/errors.hpp"

namespace sqlaser {

namespace {

// Shared denominator of the full closed forms:
// [w^2 - cn kappa(1-mu) - (kappa mu/2) Gamma1]^2 + w^2 (Gamma1 + kappa mu/2)^2
double full_denominator(const OperatingPoint& op, double w) {
    const double k = op.params.kappa;
    const double w2 = w * w;
    const double shift = op.cn() * k * (1.0 - op.mu) + 0.5 * k * op.mu * op.Gamma1;
    const double damp = op.Gamma1 + 0.5 * k * op.mu;
    const double a = w2 - shift;
    return a * a + w2 * damp * damp;
}

double lorentzian_denominator_x(const OperatingPoint& op, double w) {
    const double hw = op.params.kappa * (1.0 - 0.5 * op.mu);
    return hw * hw + w * w;
}

void check_grid(const std::vector<double>& omega) {
    if (omega.empty()) throw EmptyGrid("frequency grid is empty");
}

}  // namespace

SpectralCurve intracavity_variance_x(const OperatingPoint& op,
                                     const std::vector<double>& omega,
                                     SpectrumVariant variant) {
    check_grid(omega);
    const double k = op.params.kappa;
    const double p = op.params.pump_p;
    const double mu = op.mu;

    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    if (variant == SpectrumVariant::full) {
        const double cn = op.cn();
        const double G1 = op.Gamma1;
        const double num_const =
            G1 * G1 - cn * G1 * (0.5 * p) * (1.0 - mu) / (1.0 - 0.5 * mu);
        const double pre = 0.5 * k * (1.0 - 0.5 * mu);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            const double w2 = omega[i] * omega[i];
            out.value[i] = pre * (w2 + num_const) / full_denominator(op, omega[i]);
        }
    } else {
        const double num = 0.5 * k * (1.0 - 0.5 * mu - 0.5 * (1.0 - mu) * p);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            out.value[i] = num / lorentzian_denominator_x(op, omega[i]);
        }
    }
    return out;
}

SpectralCurve intracavity_variance_y(const OperatingPoint& op,
                                     const std::vector<double>& omega) {
    check_grid(omega);
    const double k = op.params.kappa;
    const double mu = op.mu;
    if (mu == 0.0) {
        for (double w : omega) {
            if (w == 0.0) {
                throw PhaseDiffusionDivergence(
                    "free-running laser (mu = 0): phase spectrum diverges at "
                    "omega = 0; drop the zero-frequency point or inject a "
                    "locking field");
            }
        }
    }
    const double num = 0.5 * k * (1.0 - 0.5 * mu);
    const double hw = 0.5 * k * mu;
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.value[i] = num / (hw * hw + omega[i] * omega[i]);
    }
    return out;
}

NormallyOrderedVariances normally_ordered_variances(
    const OperatingPoint& op, const std::vector<double>& omega,
    SpectrumVariant variant) {
    check_grid(omega);
    const double k = op.params.kappa;
    const double p = op.params.pump_p;
    const double mu = op.mu;

    NormallyOrderedVariances out;
    out.x.omega = omega;
    out.x.value.resize(omega.size());
    if (variant == SpectrumVariant::full) {
        const double cn = op.cn();
        const double G1 = op.Gamma1;
        const double num_const = G1 * G1 - cn * G1 * (1.0 + 0.5 * p);
        const double pre = 0.5 * k * (1.0 - mu);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            const double w2 = omega[i] * omega[i];
            out.x.value[i] =
                pre * (w2 + num_const) / full_denominator(op, omega[i]);
        }
    } else {
        const double num = -0.25 * k * (1.0 - mu) * p;
        for (std::size_t i = 0; i < omega.size(); ++i) {
            out.x.value[i] = num / lorentzian_denominator_x(op, omega[i]);
        }
    }

    // (:dy^2:) differs from the symmetric form only in the numerator weight:
    // (1-mu) in place of (1-mu/2). Reuse the guard in the symmetric routine.
    out.y = intracavity_variance_y(op, omega);
    const double rescale = (1.0 - mu) / (1.0 - 0.5 * mu);
    for (double& v : out.y.value) v *= rescale;
    return out;
}

ExternalVariances external_variances(const OperatingPoint& op,
                                     const std::vector<double>& omega,
                                     SpectrumVariant variant) {
    const double k = op.params.kappa;
    NormallyOrderedVariances no = normally_ordered_variances(op, omega, variant);
    ExternalVariances out;
    out.X.omega = omega;
    out.Y.omega = omega;
    out.X.value.resize(omega.size());
    out.Y.value.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out.X.value[i] = 0.25 + k * no.x.value[i];
        out.Y.value[i] = 0.25 + k * no.y.value[i];
    }
    return out;
}

SpectralCurve SpectralMatrix::curve(int i, int j) const {
    SpectralCurve out;
    out.omega = omega;
    out.value = value[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

SpectralMatrix general_spectrum(const TransferModel& model,
                                const std::vector<double>& omega) {
    check_grid(omega);
    using Mat3c = Eigen::Matrix3cd;
    const std::complex<double> im(0.0, 1.0);
    const Mat3c a = model.drift.cast<std::complex<double>>();
    const Mat3c sigma = model.noise.sigma.cast<std::complex<double>>();

    SpectralMatrix out;
    out.omega = omega;
    for (auto& row : out.value)
        for (auto& cell : row) cell.resize(omega.size());

    for (std::size_t k = 0; k < omega.size(); ++k) {
        Mat3c m = a - im * omega[k] * Mat3c::Identity();
        Eigen::JacobiSVD<Mat3c> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(2);
        if (!(smin > 0.0) || smax / smin > 1e12) {
            std::ostringstream msg;
            msg << "transfer matrix A - i*w*I is singular at omega = "
                << omega[k] << " (condition number "
                << (smin > 0.0 ? smax / smin
                               : std::numeric_limits<double>::infinity())
                << "); the spectrum diverges there";
            throw SingularSystem(msg.str());
        }
        const Mat3c b = svd.solve(Mat3c::Identity());
        const Mat3c s = b * sigma * b.adjoint();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.value[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(j)][k] = s(i, j).real();
    }
    return out;
}

PhaseVariance phase_variance(const OperatingPoint& op) {
    const double k = op.params.kappa;
    const double mu = op.mu;
    if (mu <= 0.0) {
        throw PhaseDiffusionDivergence(
            "free-running laser (mu = 0): <dy^2> diverges, the phase "
            "performs an unbounded random walk");
    }
    const double num = 0.5 * k * (1.0 - 0.5 * mu);
    const double hw = 0.5 * k * mu;

    PhaseVariance out;
    auto lorentzian = [num, hw](double w) { return num / (hw * hw + w * w); };
    // <dy^2> = (1/2pi) Integral S_y(w) dw; peak value sets the tolerance scale.
    const double peak = num / (hw * hw);
    out.quadrature = integrate_real_line(lorentzian, hw, 1e-12 * peak);
    require_converged(out.quadrature, "phase-quadrature variance");
    out.dy2 = out.quadrature.value / (2.0 * std::numbers::pi);
    out.dphi2 = out.dy2 / op.n;
    out.dphi2_leading_order = 1.0 / std::sqrt(4.0 * op.params.n_in * op.n);
    out.ratio_to_leading_order = out.dphi2 / out.dphi2_leading_order;
    return out;
}

}  // namespace sqlaser
