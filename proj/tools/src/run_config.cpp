#include "run_config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sqlaser/errors.hpp"
#include "sqlaser/spectral_curve.hpp"

namespace sqlaser::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void reject_unknown(const json& j, const char* where,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) {
            throw ConfigError(std::string("unknown field '") + key + "' in " +
                              where);
        }
    }
}

double number_in(const json& j, const char* where, const char* key,
                 double fallback, bool required = false) {
    if (!j.contains(key)) {
        if (required)
            throw ConfigError(std::string("missing field '") + key + "' in " +
                              where);
        return fallback;
    }
    if (!j[key].is_number())
        throw ConfigError(std::string("field '") + key + "' in " + where +
                          " must be a number");
    return j[key].get<double>();
}

std::size_t count_in(const json& j, const char* where, const char* key,
                     std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_unsigned())
        throw ConfigError(std::string("field '") + key + "' in " + where +
                          " must be a non-negative integer");
    return j[key].get<std::size_t>();
}

std::string string_in(const json& j, const char* where, const char* key,
                      const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string())
        throw ConfigError(std::string("field '") + key + "' in " + where +
                          " must be a string");
    return j[key].get<std::string>();
}

GridSpec parse_grid(const json& j) {
    reject_unknown(j, "grid",
                   {"omega_min", "omega_max", "points", "spacing"});
    GridSpec g;
    g.omega_min = number_in(j, "grid", "omega_min", 0.0, true);
    g.omega_max = number_in(j, "grid", "omega_max", 0.0, true);
    g.points = count_in(j, "grid", "points", 0);
    if (g.points == 0) throw ConfigError("grid needs a positive 'points'");
    g.spacing = string_in(j, "grid", "spacing", "linear");
    if (g.spacing != "linear" && g.spacing != "log-symmetric")
        throw ConfigError("grid spacing must be linear or log-symmetric");
    return g;
}

SweepSpec parse_sweep(const json& j) {
    reject_unknown(j, "sweep",
                   {"reflectivity", "script_P", "d_A_min", "d_A_max",
                    "points", "spacing"});
    SweepSpec s;
    s.reflectivity = number_in(j, "sweep", "reflectivity", s.reflectivity);
    s.script_P = number_in(j, "sweep", "script_P", s.script_P);
    s.d_A_min = number_in(j, "sweep", "d_A_min", s.d_A_min);
    s.d_A_max = number_in(j, "sweep", "d_A_max", s.d_A_max);
    s.points = count_in(j, "sweep", "points", s.points);
    s.spacing = string_in(j, "sweep", "spacing", s.spacing);
    if (s.spacing != "log" && s.spacing != "linear")
        throw ConfigError("sweep spacing must be log or linear");
    return s;
}

OutputSpec parse_output(const json& j) {
    reject_unknown(j, "output", {"path", "format"});
    OutputSpec o;
    o.path = string_in(j, "output", "path", "");
    o.format = string_in(j, "output", "format", "");
    if (!o.format.empty() && o.format != "csv" && o.format != "json")
        throw ConfigError("output format must be csv or json");
    return o;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown(j, "config",
                   {"operation", "laser", "laser2", "grid", "sim",
                    "dense_coding", "sweep", "output"});

    RunConfig cfg;
    if (j.contains("operation")) {
        if (!j["operation"].is_string())
            throw ConfigError("field 'operation' must be a string");
        cfg.operation = j["operation"].get<std::string>();
    }
    if (j.contains("laser")) cfg.laser = params_from_json(j["laser"].dump());
    if (j.contains("laser2"))
        cfg.laser2 = params_from_json(j["laser2"].dump());
    if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
    if (j.contains("sim")) cfg.sim = sim_config_from_json(j["sim"].dump());
    if (j.contains("dense_coding"))
        cfg.dense_coding = dense_coding_from_json(j["dense_coding"].dump());
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j["sweep"]);
    if (j.contains("output")) cfg.output = parse_output(j["output"]);
    return cfg;
}

void validate_config_for(const RunConfig& cfg, const std::string& subcommand) {
    if (cfg.operation && *cfg.operation != subcommand) {
        throw ConfigError("config is for operation '" + *cfg.operation +
                          "' but subcommand '" + subcommand + "' was invoked");
    }

    struct Shape {
        const char* name;
        bool laser2, grid, sim, dense_coding, sweep;
        bool needs_sim, needs_dense_coding;
    };
    static constexpr Shape shapes[] = {
        {"steady-state", false, false, false, false, false, false, false},
        {"spectrum", false, true, false, false, false, false, false},
        {"external-spectrum", false, true, false, false, false, false, false},
        {"phase-variance", false, false, false, false, false, false, false},
        {"simulate", false, false, true, false, false, true, false},
        {"duan", true, true, false, false, false, false, false},
        {"dense-coding-snr", true, true, false, true, false, false, true},
        {"dense-coding-smi", true, false, false, true, false, false, true},
        {"smi-sweep", true, false, false, false, true, false, false},
        {"teleport-fidelity", true, true, false, false, false, false, false},
        {"selftest", false, false, false, false, false, false, false},
    };
    const Shape* shape = nullptr;
    for (const Shape& s : shapes) {
        if (subcommand == s.name) shape = &s;
    }
    if (shape == nullptr)
        throw ConfigError("unknown operation '" + subcommand + "'");

    auto forbid = [&](bool present, bool allowed, const char* block) {
        if (present && !allowed)
            throw ConfigError("config block '" + std::string(block) +
                              "' is not used by '" + subcommand + "'");
    };
    if (subcommand == "selftest" && cfg.laser)
        throw ConfigError("selftest runs at a pinned point; drop 'laser'");
    forbid(cfg.laser2.has_value(), shape->laser2, "laser2");
    forbid(cfg.grid.has_value(), shape->grid, "grid");
    forbid(cfg.sim.has_value(), shape->sim, "sim");
    forbid(cfg.dense_coding.has_value(), shape->dense_coding, "dense_coding");
    forbid(cfg.sweep.has_value(), shape->sweep, "sweep");
    if (shape->needs_sim && !cfg.sim)
        throw ConfigError("'" + subcommand + "' needs a 'sim' block");
    if (shape->needs_dense_coding && !cfg.dense_coding)
        throw ConfigError("'" + subcommand + "' needs a 'dense_coding' block");
}

std::vector<double> resolve_grid(const std::optional<GridSpec>& spec,
                                 const OperatingPoint& op) {
    if (!spec) return default_grid(op);
    if (spec->spacing == "linear")
        return linear_grid(spec->omega_min, spec->omega_max, spec->points);
    return log_symmetric_grid(spec->omega_min, spec->omega_max, spec->points);
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
    if (!(spec.d_A_min > 0.0) || !(spec.d_A_max > spec.d_A_min))
        throw InvalidParameter("sweep needs 0 < d_A_min < d_A_max");
    if (spec.points < 2)
        throw InvalidParameter("sweep needs at least 2 points");
    std::vector<double> grid(spec.points);
    const double n1 = static_cast<double>(spec.points - 1);
    if (spec.spacing == "linear") {
        const double step = (spec.d_A_max - spec.d_A_min) / n1;
        for (std::size_t i = 0; i < spec.points; ++i)
            grid[i] = spec.d_A_min + step * static_cast<double>(i);
    } else {
        const double ratio = std::log(spec.d_A_max / spec.d_A_min) / n1;
        for (std::size_t i = 0; i < spec.points; ++i)
            grid[i] = spec.d_A_min * std::exp(ratio * static_cast<double>(i));
    }
    grid.back() = spec.d_A_max;
    return grid;
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty()) return path;
    const char* dir = std::getenv("SQLASER_OUT_DIR");
    if (dir == nullptr || *dir == '\0' || path.front() == '/') return path;
    std::string full(dir);
    if (full.back() != '/') full += '/';
    return full + path;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace sqlaser::cli
