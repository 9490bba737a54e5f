#include "sqlaser/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sqlaser {

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0)) {
        throw NonPositiveRate(std::string(name) + " must be > 0, got " +
                              std::to_string(value));
    }
}

}  // namespace

void LaserParams::validate() const
{
    require_positive(kappa, "kappa");
    require_positive(g, "g");
    require_positive(gamma1, "gamma1");
    require_positive(gamma2, "gamma2");
    require_positive(gamma_perp, "gamma_perp");
    if (!(pump_rate_R >= 0.0)) {
        throw NonPositiveRate("pump_rate_R must be >= 0, got " +
                              std::to_string(pump_rate_R));
    }
    if (!(n_in >= 0.0)) {
        throw InvalidParameter("n_in must be >= 0, got " + std::to_string(n_in));
    }
    if (!(pump_p >= 0.0 && pump_p <= 1.0)) {
        throw InvalidParameter("pump_p must lie in [0, 1], got " +
                               std::to_string(pump_p));
    }
    if (!std::isfinite(phi_in)) {
        throw InvalidParameter("phi_in must be finite");
    }
    if (pump_rate_R == 0.0 && n_in == 0.0) {
        throw NoLasing("pump_rate_R = 0 and n_in = 0: no field builds up");
    }
}

LaserParams LaserParams::normalized() const
{
    LaserParams out = *this;
    const double two_pi = 2.0 * std::numbers::pi;
    out.phi_in = std::fmod(phi_in, two_pi);
    if (out.phi_in < 0.0) out.phi_in += two_pi;
    return out;
}

OperatingPoint solve_steady_state(const LaserParams& raw)
{
    raw.validate();
    const LaserParams p = raw.normalized();

    OperatingPoint op;
    op.params = p;

    const double r = p.pump_rate_R / p.kappa;
    if (p.n_in == 0.0) {
        // Free-running laser: the steady-state condition reduces to
        // n = R / kappa, kept exact instead of going through the square root.
        op.n = r;
        op.mu = 0.0;
    } else {
        // Positive root of s^2 - s*sqrt(n_in) - R/kappa = 0 with s = sqrt(n).
        const double root_nin = std::sqrt(p.n_in);
        const double s = 0.5 * (root_nin + std::sqrt(p.n_in + 4.0 * r));
        op.n = s * s;
        op.mu = std::sqrt(p.n_in / op.n);
    }

    op.N1 = p.pump_rate_R / p.gamma1;
    op.c = 2.0 * p.g * p.g / p.gamma_perp;
    op.Gamma1 = p.gamma1 + op.c * op.n;

    RegimeFlags f;
    f.adiabatic.ratio =
        std::min(p.gamma2, p.gamma_perp) / std::max(p.gamma1, p.kappa);
    f.adiabatic.ok = f.adiabatic.ratio >= RegimeFlags::adiabatic_min_ratio;
    f.saturation.ratio = op.c * op.n / p.gamma1;
    f.saturation.ok = f.saturation.ratio >= RegimeFlags::saturation_min_ratio;
    f.weak_injection.ratio = op.mu;
    f.weak_injection.ok = op.mu <= RegimeFlags::weak_injection_max_mu;
    f.macroscopic.ratio = op.n;
    f.macroscopic.ok = op.n >= RegimeFlags::macroscopic_min_n;
    op.flags = f;

    return op;
}

std::vector<std::string> validate_regime(const OperatingPoint& op)
{
    std::vector<std::string> warnings;
    const auto add = [&warnings](const char* name, const RegimeCheck& check) {
        if (check.ok) return;
        std::ostringstream os;
        os << name << " violated, ratio " << check.ratio;
        warnings.push_back(os.str());
    };
    add("adiabatic_ok", op.flags.adiabatic);
    add("saturation_ok", op.flags.saturation);
    add("weak_injection_ok", op.flags.weak_injection);
    add("macroscopic_ok", op.flags.macroscopic);
    return warnings;
}

}  // namespace sqlaser
