#include "sqlaser/protocols.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqlaser/errors.hpp"

namespace sqlaser {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool same_except_phase(const LaserParams& a, const LaserParams& b) {
    return a.kappa == b.kappa && a.g == b.g && a.gamma1 == b.gamma1 &&
           a.gamma2 == b.gamma2 && a.gamma_perp == b.gamma_perp &&
           a.pump_rate_R == b.pump_rate_R && a.pump_p == b.pump_p &&
           a.n_in == b.n_in;
}

void check_grid(const std::vector<double>& omega) {
    if (omega.empty()) throw EmptyGrid("frequency grid is empty");
}

// Numerator and denominator constants of the saturated combined variance
//   V(w) = (w^2 + a) / (w^2 + b),
// a = kappa^2 [mu^2/4 + (1-p)(1-mu)], b = kappa^2 (1-mu/2)^2. 4 (dX1^2)_w
// equals the same ratio, which is what makes the Duan, dense-coding, and
// teleportation formulas share this helper.
struct SqueezedRatio {
    double a = 0.0;
    double b = 0.0;

    static SqueezedRatio for_source(const EprSource& src) {
        const OperatingPoint& op = src.laser1;
        const double k2 = op.params.kappa * op.params.kappa;
        const double mu = op.mu;
        const double p = op.params.pump_p;
        SqueezedRatio r;
        r.a = k2 * (0.25 * mu * mu + (1.0 - p) * (1.0 - mu));
        r.b = k2 * (1.0 - 0.5 * mu) * (1.0 - 0.5 * mu);
        return r;
    }

    double operator()(double w) const {
        const double w2 = w * w;
        return (w2 + a) / (w2 + b);
    }
};

double gaussian_signal(const DenseCodingParams& dc, double w) {
    const double half_var = 0.5 * dc.signal_bandwidth * dc.signal_bandwidth;
    return dc.photon_flux / std::sqrt(std::numbers::pi * half_var) *
           std::exp(-w * w / half_var);
}

// Mixed-scaling information integral shared by shannon_information and
// smi_sweep. `ratio` must be evaluated at unit kappa (w = omega/kappa).
double mixed_information(const SqueezedRatio& ratio, double kappa,
                         double reflectivity, double script_P, double d_A,
                         double abs_tol) {
    const double t = 1.0 - reflectivity;
    const double k2 = kappa * kappa;
    const double amp =
        reflectivity * script_P / (d_A * std::sqrt(kHalfPi));
    auto integrand = [&](double w) {
        const double w2 = w * w;
        const double v4 = (w2 * k2 + ratio.a) / (w2 * k2 + ratio.b);
        const double gain = 1.0 / (reflectivity + t * v4);
        return std::log1p(amp * gain * std::exp(-2.0 * w2 / (d_A * d_A)));
    };
    const QuadratureResult q =
        integrate_real_line(integrand, std::max(1.0, d_A), abs_tol);
    require_converged(q, "mixed-scaling information integral");
    return q.value;
}

}  // namespace

EprSource EprSource::create(const LaserParams& base) {
    LaserParams first = base;
    first.phi_in = 0.0;
    LaserParams second = base;
    second.phi_in = kHalfPi;
    EprSource src;
    src.laser1 = solve_steady_state(first);
    src.laser2 = solve_steady_state(second);
    src.identical_params = true;
    return src;
}

EprSource EprSource::create(const LaserParams& first,
                            const LaserParams& second) {
    EprSource src;
    src.laser1 = solve_steady_state(first);
    src.laser2 = solve_steady_state(second);
    src.identical_params = same_except_phase(first, second);
    return src;
}

void EprSource::require_identical(const char* operation) const {
    if (!identical_params) {
        std::ostringstream msg;
        msg << operation
            << " assumes both sources share every parameter except the "
               "locking phase";
        throw NonIdenticalLasers(msg.str());
    }
}

void DenseCodingParams::validate() const {
    if (!(reflectivity > 0.0) || !(reflectivity < 1.0))
        throw InvalidParameter("reflectivity must lie strictly in (0, 1)");
    if (!(photon_flux >= 0.0) || !std::isfinite(photon_flux))
        throw InvalidParameter("photon_flux must be non-negative and finite");
    if (!(signal_bandwidth > 0.0) || !std::isfinite(signal_bandwidth))
        throw InvalidParameter("signal_bandwidth must be positive and finite");
}

double DenseCodingParams::d_A(double kappa) const {
    return 2.0 * std::numbers::pi * signal_bandwidth / kappa;
}

double DenseCodingParams::script_P(double kappa) const {
    return 2.0 * std::numbers::pi * photon_flux / kappa;
}

DenseCodingParams dense_coding_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("dense-coding config must be a JSON object");
    static constexpr const char* known[] = {"reflectivity", "photon_flux",
                                            "signal_bandwidth"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok)
            throw ConfigError("unknown dense-coding field '" + key + "'");
    }
    DenseCodingParams dc;
    auto field = [&](const char* name, double& out) {
        if (!j.contains(name))
            throw ConfigError(std::string("missing dense-coding field '") +
                              name + "'");
        if (!j[name].is_number())
            throw ConfigError(std::string("field '") + name +
                              "' must be a number");
        out = j[name].get<double>();
    };
    field("reflectivity", dc.reflectivity);
    field("photon_flux", dc.photon_flux);
    field("signal_bandwidth", dc.signal_bandwidth);
    try {
        dc.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    return dc;
}

std::string dense_coding_to_json(const DenseCodingParams& dc) {
    nlohmann::json j;
    j["reflectivity"] = dc.reflectivity;
    j["photon_flux"] = dc.photon_flux;
    j["signal_bandwidth"] = dc.signal_bandwidth;
    return j.dump(2) + "\n";
}

SpectralCurve duan_combined_variance(const EprSource& src,
                                     const std::vector<double>& omega,
                                     SpectrumVariant variant) {
    src.require_identical("duan_combined_variance");
    check_grid(omega);
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    if (variant == SpectrumVariant::saturated) {
        const SqueezedRatio v = SqueezedRatio::for_source(src);
        for (std::size_t i = 0; i < omega.size(); ++i)
            out.value[i] = v(omega[i]);
    } else {
        // General composition: the combined variance is 4 (dX1^2)_w with the
        // full (unsaturated) emitted-field variance.
        const ExternalVariances ext =
            external_variances(src.laser1, omega, SpectrumVariant::full);
        for (std::size_t i = 0; i < omega.size(); ++i)
            out.value[i] = 4.0 * ext.X.value[i];
    }
    return out;
}

DuanBand duan_entangled_band(const EprSource& src, double threshold) {
    src.require_identical("duan_entangled_band");
    DuanBand band;
    if (!(threshold > 0.0)) return band;

    const SqueezedRatio v = SqueezedRatio::for_source(src);
    const double v0 = v.a / v.b;
    if (!(v0 < threshold)) return band;  // excludes the p = 0 identity V == 1
    band.empty = false;

    // V is monotone between V(0) = a/b and V(inf) = 1, so with V(0) below a
    // threshold >= 1 it never crosses it at finite frequency.
    if (threshold >= 1.0) {
        band.everywhere = true;
        band.omega_upper = std::numeric_limits<double>::infinity();
        return band;
    }

    double lo = 0.0;
    double hi = src.laser1.params.kappa;
    while (v(hi) < threshold) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            band.everywhere = true;
            band.omega_upper = std::numeric_limits<double>::infinity();
            return band;
        }
    }
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (v(mid) < threshold ? lo : hi) = mid;
    }
    band.omega_upper = 0.5 * (lo + hi);
    return band;
}

SpectralCurve alice_signal_spectrum(const DenseCodingParams& dc,
                                    const std::vector<double>& omega) {
    dc.validate();
    check_grid(omega);
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i)
        out.value[i] = gaussian_signal(dc, omega[i]);
    return out;
}

SpectralCurve snr_spectrum(const EprSource& src, const DenseCodingParams& dc,
                           const std::vector<double>& omega,
                           SpectrumVariant variant) {
    src.require_identical("snr_spectrum");
    dc.validate();
    check_grid(omega);
    const double r = dc.reflectivity;
    const double t = dc.transmissivity();

    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    if (variant == SpectrumVariant::saturated) {
        const SqueezedRatio v = SqueezedRatio::for_source(src);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            out.value[i] =
                r * gaussian_signal(dc, omega[i]) / (r + t * v(omega[i]));
        }
    } else {
        const ExternalVariances ext =
            external_variances(src.laser1, omega, SpectrumVariant::full);
        for (std::size_t i = 0; i < omega.size(); ++i) {
            out.value[i] = r * gaussian_signal(dc, omega[i]) /
                           (r + t * 4.0 * ext.X.value[i]);
        }
    }
    return out;
}

SpectralCurve snr_spectrum_reduced(const EprSource& src,
                                   const DenseCodingParams& dc,
                                   const std::vector<double>& omega) {
    src.require_identical("snr_spectrum_reduced");
    dc.validate();
    check_grid(omega);
    const double k2 =
        src.laser1.params.kappa * src.laser1.params.kappa;
    const double mu = src.laser1.mu;
    const double floor = dc.reflectivity + 0.25 * mu * mu;
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w2 = omega[i] * omega[i];
        out.value[i] = (w2 + k2) / (w2 + floor * k2) * dc.reflectivity *
                       gaussian_signal(dc, omega[i]);
    }
    return out;
}

ShannonInformation shannon_information(const EprSource& src,
                                       const DenseCodingParams& dc,
                                       bool bits) {
    src.require_identical("shannon_information");
    dc.validate();
    const double kappa = src.laser1.params.kappa;
    const double r = dc.reflectivity;
    const double t = dc.transmissivity();
    const SqueezedRatio v = SqueezedRatio::for_source(src);

    auto integrand = [&](double w) {
        return std::log1p(r * gaussian_signal(dc, w) / (r + t * v(w)));
    };
    const double scale = std::max(kappa, dc.signal_bandwidth);
    const double abs_tol = 1e-10 * std::max(1.0, kappa);

    ShannonInformation info;
    info.quadrature = integrate_real_line(integrand, scale, abs_tol);
    require_converged(info.quadrature, "Shannon information integral");
    info.raw = info.quadrature.value;
    info.scaled_uniform = 2.0 * std::numbers::pi * info.raw / kappa;
    info.scaled_mixed = mixed_information(v, kappa, r, dc.script_P(kappa),
                                          dc.d_A(kappa), 1e-10);
    info.bits = bits;
    if (bits) {
        const double ln2 = std::numbers::ln2;
        info.raw /= ln2;
        info.scaled_uniform /= ln2;
        info.scaled_mixed /= ln2;
    }
    return info;
}

std::vector<SmiSweepPoint> smi_sweep(const EprSource& src,
                                     double reflectivity, double script_P,
                                     const std::vector<double>& d_A_values) {
    src.require_identical("smi_sweep");
    if (!(reflectivity > 0.0) || !(reflectivity < 1.0))
        throw InvalidParameter("reflectivity must lie strictly in (0, 1)");
    if (!(script_P >= 0.0))
        throw InvalidParameter("script_P must be non-negative");
    if (d_A_values.empty()) throw EmptyGrid("d_A grid is empty");

    const double kappa = src.laser1.params.kappa;
    const SqueezedRatio v = SqueezedRatio::for_source(src);
    std::vector<SmiSweepPoint> out;
    out.reserve(d_A_values.size());
    for (double d_A : d_A_values) {
        if (!(d_A > 0.0))
            throw InvalidParameter("d_A values must be positive");
        out.push_back(
            {d_A, mixed_information(v, kappa, reflectivity, script_P, d_A,
                                    1e-10)});
    }
    return out;
}

OutputFieldComposition dense_coding_output_fields(
    const EprSource& src, const DenseCodingParams& dc) {
    src.require_identical("dense_coding_output_fields");
    dc.validate();
    const double half = std::sqrt(0.5 * dc.reflectivity);
    const double through = std::sqrt(dc.transmissivity());
    OutputFieldComposition out;
    out.beam1 = {half, half, half, through};
    out.beam2 = {half, half, -half, through};
    // The signal slot is a classical displacement; only vacua and source
    // carry quantum noise.
    auto qnorm = [](const std::array<double, 4>& c) {
        return c[1] * c[1] + c[2] * c[2] + c[3] * c[3];
    };
    out.quantum_norm1 = qnorm(out.beam1);
    out.quantum_norm2 = qnorm(out.beam2);
    return out;
}

SpectralCurve teleport_fidelity_spectrum(const EprSource& src,
                                         const std::vector<double>& omega,
                                         SpectrumVariant variant) {
    src.require_identical("teleport_fidelity_spectrum");
    check_grid(omega);
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    if (variant == SpectrumVariant::saturated) {
        const SqueezedRatio v = SqueezedRatio::for_source(src);
        for (std::size_t i = 0; i < omega.size(); ++i)
            out.value[i] = 1.0 / (1.0 + v(omega[i]));
    } else {
        // Laser 1 contributes its squeezed X arm, laser 2 its squeezed Y
        // arm; with identical sources both arms carry the same variance.
        const ExternalVariances ext =
            external_variances(src.laser1, omega, SpectrumVariant::full);
        for (std::size_t i = 0; i < omega.size(); ++i)
            out.value[i] = 1.0 / (1.0 + 4.0 * ext.X.value[i]);
    }
    return out;
}

SpectralCurve teleport_fidelity_spectrum(const EprSource& src,
                                         const SpectralCurve& input_x,
                                         const SpectralCurve& input_y,
                                         SpectrumVariant variant) {
    src.require_identical("teleport_fidelity_spectrum");
    input_x.validate();
    input_y.validate();
    if (input_x.omega != input_y.omega)
        throw InvalidParameter(
            "input variance curves must share one frequency grid");
    for (std::size_t i = 0; i < input_x.size(); ++i) {
        if (!(input_x.value[i] > 0.0) || !(input_y.value[i] > 0.0)) {
            std::ostringstream msg;
            msg << "input variance must be positive everywhere (violated at "
                   "omega = "
                << input_x.omega[i] << ")";
            throw NonPositiveInputVariance(msg.str());
        }
    }

    std::vector<double> vx(input_x.size());
    std::vector<double> vy(input_x.size());
    if (variant == SpectrumVariant::saturated) {
        const SqueezedRatio v = SqueezedRatio::for_source(src);
        for (std::size_t i = 0; i < input_x.size(); ++i)
            vx[i] = vy[i] = 0.25 * v(input_x.omega[i]);
    } else {
        const ExternalVariances e1 =
            external_variances(src.laser1, input_x.omega, SpectrumVariant::full);
        const ExternalVariances e2 =
            external_variances(src.laser2, input_x.omega, SpectrumVariant::full);
        // Squeezed arms: X of source 1, Y of source 2 (the pi/2 phase turns
        // source 2's amplitude quadrature into the lab-frame Y).
        vx = e1.X.value;
        vy = e2.X.value;
    }

    SpectralCurve out;
    out.omega = input_x.omega;
    out.value.resize(input_x.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.value[i] = std::sqrt(1.0 / (1.0 + vx[i] / input_x.value[i])) *
                       std::sqrt(1.0 / (1.0 + vy[i] / input_y.value[i]));
    }
    return out;
}

SpectralCurve teleport_fidelity_closed(const EprSource& src,
                                       const std::vector<double>& omega) {
    src.require_identical("teleport_fidelity_closed");
    check_grid(omega);
    const double k2 = src.laser1.params.kappa * src.laser1.params.kappa;
    const double p = src.laser1.params.pump_p;
    SpectralCurve out;
    out.omega = omega;
    out.value.resize(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w2 = omega[i] * omega[i];
        out.value[i] = 0.5 * (w2 + k2) / (w2 + k2 * (1.0 - 0.5 * p));
    }
    return out;
}

}  // namespace sqlaser
