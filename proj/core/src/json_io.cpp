// JSON (de)serialization kept in one translation unit so the vendored
// single-header parser stays out of the public interface.
#include <json.hpp>

#include <array>
#include <utility>

#include "sqlaser/core_model.hpp"
#include "sqlaser/spectral_curve.hpp"

namespace sqlaser {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 9> kParamFields = {
    "kappa",  "g",      "gamma1", "gamma2", "gamma_perp",
    "pump_rate_R", "pump_p", "n_in",   "phi_in",
};

double number_field(const json& j, const char* key)
{
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(std::string("missing required field '") + key + "'");
    }
    if (!it->is_number()) {
        throw ConfigError(std::string("field '") + key + "' must be a number");
    }
    return it->get<double>();
}

}  // namespace

LaserParams params_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("laser parameters must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* field : kParamFields) {
            if (key == field) { known = true; break; }
        }
        if (!known) {
            throw ConfigError("unknown field '" + key + "' in laser parameters");
        }
    }

    LaserParams p;
    p.kappa = number_field(j, "kappa");
    p.g = number_field(j, "g");
    p.gamma1 = number_field(j, "gamma1");
    p.gamma2 = number_field(j, "gamma2");
    p.gamma_perp = number_field(j, "gamma_perp");
    p.pump_rate_R = number_field(j, "pump_rate_R");
    p.pump_p = number_field(j, "pump_p");
    p.n_in = number_field(j, "n_in");
    p.phi_in = number_field(j, "phi_in");
    p.validate();
    return p.normalized();
}

std::string params_to_json(const LaserParams& p, int indent)
{
    const json j = {
        {"kappa", p.kappa},
        {"g", p.g},
        {"gamma1", p.gamma1},
        {"gamma2", p.gamma2},
        {"gamma_perp", p.gamma_perp},
        {"pump_rate_R", p.pump_rate_R},
        {"pump_p", p.pump_p},
        {"n_in", p.n_in},
        {"phi_in", p.phi_in},
    };
    return j.dump(indent);
}

std::string curve_to_json(const SpectralCurve& curve)
{
    json pairs = json::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        pairs.push_back(json::array({curve.omega[i], curve.value[i]}));
    }
    return pairs.dump();
}

}  // namespace sqlaser
