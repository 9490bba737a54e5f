#pragma once

#include <array>
#include <vector>

#include "sqlaser/core_model.hpp"
#include "sqlaser/quadrature.hpp"
#include "sqlaser/spectral_curve.hpp"
#include "sqlaser/transfer_model.hpp"

namespace sqlaser {

// Closed-form spectra come in two flavors. `full` keeps the complete
// denominator structure of the linearized model and is valid at any
// saturation; `saturated` is the deep-saturation shortcut (Gamma1 -> c*n,
// c*n >> kappa) whose Lorentzians the locking and entanglement formulas are
// built on. Both agree to better than 1e-3 once c*n exceeds ~1e4 * gamma1
// and the band stays within a few kappa.
enum class SpectrumVariant { full, saturated };

// Intracavity amplitude-quadrature spectrum (dx^2)_omega.
// full:      kappa(1-mu/2)/2 * [w^2 + Gamma1^2 - cn Gamma1 (p/2)(1-mu)/(1-mu/2)]
//            / {[w^2 - cn kappa(1-mu) - (kappa mu/2)Gamma1]^2 + w^2(Gamma1 + kappa mu/2)^2}
// saturated: (kappa/2) [1 - mu/2 - (1-mu)p/2] / [kappa^2(1-mu/2)^2 + w^2]
SpectralCurve intracavity_variance_x(const OperatingPoint& op,
                                     const std::vector<double>& omega,
                                     SpectrumVariant variant = SpectrumVariant::full);

// Intracavity phase-quadrature spectrum (dy^2)_omega, a Lorentzian of
// half-width kappa*mu/2:  kappa(1-mu/2)/2 / (w^2 + kappa^2 mu^2/4).
// Diverges at w = 0 for the free-running laser (mu = 0).
SpectralCurve intracavity_variance_y(const OperatingPoint& op,
                                     const std::vector<double>& omega);

// Normally ordered intracavity spectra (:dx^2:), (:dy^2:).
// x full:      kappa(1-mu)/2 * [w^2 + Gamma1^2 - cn Gamma1 (1 + p/2)] / (same
//              denominator as the full symmetric form)
// x saturated: -kappa(1-mu) p/4 / [kappa^2(1-mu/2)^2 + w^2]
// y:           kappa(1-mu)/2 / (w^2 + kappa^2 mu^2/4)
struct NormallyOrderedVariances {
    SpectralCurve x;
    SpectralCurve y;
};
NormallyOrderedVariances normally_ordered_variances(
    const OperatingPoint& op, const std::vector<double>& omega,
    SpectrumVariant variant = SpectrumVariant::full);

// Out-of-cavity quadrature spectra of the emitted field,
//   (dX^2)_w = 1/4 + kappa (:dx^2:)_w,   (dY^2)_w = 1/4 + kappa (:dy^2:)_w.
// The vacuum floor is exactly 1/4. The saturated variant is the default
// here: it is the form the locking/entanglement results quote, and it makes
// the Poissonian pump (p = 0) land exactly on the shot-noise floor.
struct ExternalVariances {
    SpectralCurve X;
    SpectralCurve Y;
};
ExternalVariances external_variances(
    const OperatingPoint& op, const std::vector<double>& omega,
    SpectrumVariant variant = SpectrumVariant::saturated);

// Full 3x3 spectral matrix of (dx, dy, dN1) evaluated directly from the
// transfer model:  S(w) = (A - iwI)^-1 Sigma (A + iwI)^-T.
// Entries are the real (co-spectrum) parts; the matrix is symmetric and its
// diagonal reproduces the closed forms. This is the independent algebraic
// path used to cross-check every printed formula.
struct SpectralMatrix {
    std::vector<double> omega;
    std::array<std::array<std::vector<double>, 3>, 3> value;

    static constexpr std::array<const char*, 3> labels = {"x", "y", "N"};
    SpectralCurve curve(int i, int j) const;
};
SpectralMatrix general_spectrum(const TransferModel& model,
                                const std::vector<double>& omega);

// Steady-state phase-quadrature variance by adaptive quadrature of the
// locking Lorentzian, and the phase variance <dphi^2> = <dy^2>/n that
// follows from it. `dphi2_leading_order` is the weak-injection estimate
// 1 / sqrt(4 n_in n); the exact value undercuts it by the factor (1 - mu/2),
// which `ratio_to_leading_order` reports as a diagnostic.
struct PhaseVariance {
    double dy2 = 0.0;
    double dphi2 = 0.0;
    double dphi2_leading_order = 0.0;
    double ratio_to_leading_order = 0.0;
    QuadratureResult quadrature;
};
PhaseVariance phase_variance(const OperatingPoint& op);

}  // namespace sqlaser
