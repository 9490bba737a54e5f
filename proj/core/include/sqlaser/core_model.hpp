#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sqlaser/errors.hpp"

namespace sqlaser {

// Input parameters of a phase-locked single-mode laser with regular pumping.
// All rates share one unit of inverse time; the cavity decay kappa sets the
// natural frequency scale for every spectrum produced downstream.
//
//   kappa        cavity field decay rate
//   g            atom-field coupling constant
//   gamma1       upper lasing level decay rate
//   gamma2       lower lasing level decay rate
//   gamma_perp   polarization (coherence) decay rate
//   pump_rate_R  mean pump rate into the upper level
//   pump_p       pump statistics parameter in [0, 1]:
//                0 = Poissonian pump, 1 = perfectly regular pump
//   n_in         photon number of the injected locking field (>= 0)
//   phi_in       phase of the injected field, stored normalized to [0, 2*pi)
//
// Defaults reproduce the reference operating point used throughout the test
// suite: a deeply saturated, weakly injected, macroscopic laser.
struct LaserParams {
    double kappa = 1.0;
    double g = 0.125;
    double gamma1 = 0.03;
    double gamma2 = 1.0e4;
    double gamma_perp = 1.0e4;
    double pump_rate_R = 1.0e6;
    double pump_p = 1.0;
    double n_in = 400.0;
    double phi_in = 0.0;

    // Throws NonPositiveRate / InvalidParameter / NoLasing. pump_rate_R = 0
    // is allowed as long as an injected field is present (pure injection).
    void validate() const;

    // Copy with phi_in wrapped into [0, 2*pi).
    LaserParams normalized() const;

    bool operator==(const LaserParams&) const = default;
};

// Strict JSON (de)serialization of LaserParams. The schema requires exactly
// the nine field names of the struct; unknown or missing keys raise
// ConfigError, as do non-numeric values.
LaserParams params_from_json(std::string_view text);
std::string params_to_json(const LaserParams& p, int indent = 2);

// One regime check: ok tells whether the inequality held, ratio is the
// measured quantity that was compared against the threshold.
struct RegimeCheck {
    bool ok = false;
    double ratio = 0.0;
};

// Validity flags of the adiabatic / linearized treatment behind every
// spectral formula in this library. Thresholds are deliberate, pinned
// choices, not tunables.
struct RegimeFlags {
    static constexpr double adiabatic_min_ratio = 100.0;   // min(g2,gp)/max(g1,k)
    static constexpr double saturation_min_ratio = 100.0;  // c*n/gamma1
    static constexpr double weak_injection_max_mu = 0.1;   // mu itself
    static constexpr double macroscopic_min_n = 1.0e4;     // n itself

    RegimeCheck adiabatic;       // fast atomic variables eliminated
    RegimeCheck saturation;      // stimulated emission dominates gamma1
    RegimeCheck weak_injection;  // locking field is a small perturbation
    RegimeCheck macroscopic;     // linearization around a large mean field

    bool all_ok() const
    {
        return adiabatic.ok && saturation.ok && weak_injection.ok && macroscopic.ok;
    }
};

// Semiclassical working point of the laser. Solves
//     sqrt(n) * (sqrt(n) - sqrt(n_in)) = R / kappa
// for the intracavity photon number (positive root) and carries the derived
// quantities every spectral formula needs:
//
//   mu     = sqrt(n_in / n)   injection-locking strength, mu in [0, 1]
//   N1     = R / gamma1       upper-level population
//   c      = 2 g^2 / gamma_perp
//   Gamma1 = gamma1 + c * n   saturated population decay rate
struct OperatingPoint {
    LaserParams params;
    double n = 0.0;
    double mu = 0.0;
    double N1 = 0.0;
    double c = 0.0;
    double Gamma1 = 0.0;
    RegimeFlags flags;

    double cn() const { return c * n; }
};

OperatingPoint solve_steady_state(const LaserParams& params);

// Human-readable warnings for every regime flag that failed, in a fixed
// order, e.g. "adiabatic_ok violated, ratio 10". Empty when all flags hold.
std::vector<std::string> validate_regime(const OperatingPoint& op);

}  // namespace sqlaser
