#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqlaser/core_model.hpp"
#include "sqlaser/langevin.hpp"
#include "sqlaser/protocols.hpp"

namespace sqlaser::cli {

struct GridSpec {
    double omega_min = 0.0;
    double omega_max = 0.0;
    std::size_t points = 0;
    std::string spacing = "linear";  // or "log-symmetric"
};

struct SweepSpec {
    double reflectivity = 0.01;
    double script_P = 3.0;
    double d_A_min = 0.1;
    double d_A_max = 20.0;
    std::size_t points = 64;
    std::string spacing = "log";  // or "linear"
};

struct OutputSpec {
    std::string path;    // empty = standard output
    std::string format;  // "csv" | "json" | "" (per-command default)
};

// One JSON config file drives every subcommand; command-line flags override
// individual fields afterwards. Only the blocks a subcommand uses may be
// present (strict schema), which check-config also enforces.
struct RunConfig {
    std::optional<LaserParams> laser;
    std::optional<LaserParams> laser2;
    std::optional<GridSpec> grid;
    std::optional<SimConfig> sim;
    std::optional<DenseCodingParams> dense_coding;
    std::optional<SweepSpec> sweep;
    std::optional<OutputSpec> output;
    std::optional<std::string> operation;
};

RunConfig load_run_config(const std::string& path);

// Rejects config blocks the subcommand does not consume and demands the
// ones it cannot run without. An `operation` field must match.
void validate_config_for(const RunConfig& cfg, const std::string& subcommand);

// Frequency grid from the GridSpec, or the operating point's default grid.
std::vector<double> resolve_grid(const std::optional<GridSpec>& spec,
                                 const OperatingPoint& op);

std::vector<double> sweep_grid(const SweepSpec& spec);

// Prefixes relative paths with $SQLASER_OUT_DIR when set.
std::string resolve_output_path(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sqlaser::cli
