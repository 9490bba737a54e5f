#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sqlaser/core_model.hpp"
#include "sqlaser/quadrature.hpp"
#include "sqlaser/spectra.hpp"
#include "sqlaser/spectral_curve.hpp"

namespace sqlaser {

// Two statistically independent copies of the laser, phase-locked a quarter
// period apart, combined on a balanced beamsplitter: source 1 squeezes the X
// quadrature (phi_in = 0), source 2 squeezes Y (phi_in = pi/2). Most
// protocol formulas assume the two sources differ only in phi_in; operations
// that do refuse to run otherwise.
struct EprSource {
    OperatingPoint laser1;
    OperatingPoint laser2;
    bool identical_params = false;

    // Both sources from one parameter set; phases are forced to 0 and pi/2.
    static EprSource create(const LaserParams& base);
    static EprSource create(const LaserParams& first,
                            const LaserParams& second);

    void require_identical(const char* operation) const;
};

// Mach-Zehnder dense-coding configuration: a tap of reflectivity R splits
// Alice's signal beam onto the two squeezed sources; T = 1 - R reaches the
// homodyne stations.
struct DenseCodingParams {
    double reflectivity = 0.01;
    double photon_flux = 0.0;       // Alice's mean photon flux P
    double signal_bandwidth = 1.0;  // Gaussian width Delta_omega_A [rad/s]

    void validate() const;
    double transmissivity() const { return 1.0 - reflectivity; }
    // Dimensionless forms used by the reference sweeps.
    double d_A(double kappa) const;
    double script_P(double kappa) const;
};

DenseCodingParams dense_coding_from_json(const std::string& text);
std::string dense_coding_to_json(const DenseCodingParams& dc);

// Combined two-mode variance 2<(dQ1+dQ2)^2>_w = 2<(dP1-dP2)^2>_w
// = 4 (dX1^2)_w. Values below 1 certify entanglement (Duan criterion).
// saturated closed form:
//   (w^2 + kappa^2 [mu^2/4 + (1-p)(1-mu)]) / (w^2 + kappa^2 (1-mu/2)^2)
SpectralCurve duan_combined_variance(
    const EprSource& src, const std::vector<double>& omega,
    SpectrumVariant variant = SpectrumVariant::saturated);

// Maximal symmetric frequency interval [-omega_upper, omega_upper] on which
// the combined variance stays below the threshold. `everywhere` marks the
// sub-threshold-at-all-frequencies case (omega_upper is +inf there);
// `empty` marks no interval at all (the variance at omega = 0 already meets
// or exceeds the threshold).
struct DuanBand {
    double omega_upper = 0.0;
    bool empty = true;
    bool everywhere = false;
};
DuanBand duan_entangled_band(const EprSource& src, double threshold = 1.0);

// Alice's signal power spectrum, a normalized Gaussian:
//   sigma_w = P / sqrt(pi Delta^2 / 2) * exp(-w^2 / (Delta^2/2)),
// with Integral sigma_w dw = P.
SpectralCurve alice_signal_spectrum(const DenseCodingParams& dc,
                                    const std::vector<double>& omega);

// Signal-to-noise ratio at Bob's homodyne detector,
//   SNR_w = R sigma_w / (R + T * 4 (dX1^2)_w),
// with (dX1^2)_w the emitted-field squeezed-quadrature variance.
SpectralCurve snr_spectrum(const EprSource& src, const DenseCodingParams& dc,
                           const std::vector<double>& omega,
                           SpectrumVariant variant = SpectrumVariant::saturated);

// Algebraically reduced deep-saturation form for p = 1, mu << 1:
//   SNR_w = (w^2 + kappa^2) / (w^2 + (R + mu^2/4) kappa^2) * R sigma_w.
// Agrees with the general form to ~1e-4 relative in its validity range.
SpectralCurve snr_spectrum_reduced(const EprSource& src,
                                   const DenseCodingParams& dc,
                                   const std::vector<double>& omega);

// Shannon mutual information of the dense-coding channel,
//   I = Integral ln(1 + SNR_w) dw   [rad/s, nats].
//
// Two dimensionless forms are reported. `scaled_uniform` applies the single
// substitution w = 2 pi omega / kappa everywhere, giving 2 pi I / kappa.
// `scaled_mixed` measures the signal bandwidth in units kappa/(2 pi) (d_A)
// but the squeezing bandwidth in units kappa, i.e. integrates
//   ln[1 + G(w) * R * scriptP / (d_A sqrt(pi/2)) * exp(-2 w^2 / d_A^2)] dw
// with G(w) the gain (w^2+1)/(w^2 + R + T*[mu^2/4+(1-p)(1-mu)]) evaluated at
// w = omega/kappa. The established reference curves for this protocol are
// drawn in the mixed scaling; the sweep below reproduces them.
struct ShannonInformation {
    double raw = 0.0;
    double scaled_uniform = 0.0;
    double scaled_mixed = 0.0;
    bool bits = false;  // when true, values are divided by ln 2
    QuadratureResult quadrature;
};
ShannonInformation shannon_information(const EprSource& src,
                                       const DenseCodingParams& dc,
                                       bool bits = false);

// Mixed-scaling information as a function of the dimensionless signal
// bandwidth d_A, at fixed reflectivity and dimensionless flux scriptP.
struct SmiSweepPoint {
    double d_A = 0.0;
    double smi = 0.0;
};
std::vector<SmiSweepPoint> smi_sweep(const EprSource& src,
                                     double reflectivity, double script_P,
                                     const std::vector<double>& d_A_values);

// Linear composition of Bob's two output beams over the mode basis
// (signal, vac1, vac2, source). The printed beamsplitter coefficients put
// weight sqrt(R/2) on the signal and both vacua and sqrt(T) on the source;
// the signal is a classical displacement, so the quantum weight per beam is
// R/2 + R/2 + T = 1.
struct OutputFieldComposition {
    std::array<double, 4> beam1{};
    std::array<double, 4> beam2{};
    double quantum_norm1 = 0.0;
    double quantum_norm2 = 0.0;
};
OutputFieldComposition dense_coding_output_fields(const EprSource& src,
                                                  const DenseCodingParams& dc);

// Teleportation fidelity spectrum for a coherent-state input,
//   F_w = 1 / (1 + 4 V_w),
// with V_w the emitted squeezed-quadrature variance shared by the X and Y
// arms (identical sources). The general overload takes explicit input
// variance curves on the same grid:
//   F_w = [1/(1 + VX/VXin)]^{1/2} [1/(1 + VY/VYin)]^{1/2}.
SpectralCurve teleport_fidelity_spectrum(
    const EprSource& src, const std::vector<double>& omega,
    SpectrumVariant variant = SpectrumVariant::saturated);
SpectralCurve teleport_fidelity_spectrum(
    const EprSource& src, const SpectralCurve& input_x,
    const SpectralCurve& input_y,
    SpectrumVariant variant = SpectrumVariant::saturated);

// mu -> 0 limit of the saturated fidelity:
//   F_w = (1/2) (w^2 + kappa^2) / (w^2 + kappa^2 (1 - p/2)).
// Ranges over [1/2, 1/(2-p)]; 1/2 exactly for a Poissonian pump.
SpectralCurve teleport_fidelity_closed(const EprSource& src,
                                       const std::vector<double>& omega);

}  // namespace sqlaser
