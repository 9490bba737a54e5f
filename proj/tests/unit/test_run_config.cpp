#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "run_config.hpp"
#include "sqlaser/core_model.hpp"
#include "sqlaser/errors.hpp"
#include "sqlaser/spectral_curve.hpp"

using namespace sqlaser;
using namespace sqlaser::cli;

namespace {

// Each test writes its own uniquely named file so parallel runs don't race.
std::string temp_config(const std::string& tag, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("sqlaser_cfgtest_" + tag + ".json");
    std::ofstream out(path);
    out << text;
    out.close();
    return path.string();
}

}  // namespace

TEST_CASE("loading a config with every block for its operation") {
    const std::string path = temp_config("full", R"({
        "operation": "dense-coding-snr",
        "laser": {"kappa": 1.0, "g": 0.125, "gamma1": 0.03,
                  "gamma2": 1e4, "gamma_perp": 1e4, "pump_rate_R": 1e6,
                  "pump_p": 1.0, "n_in": 400.0, "phi_in": 0.0},
        "laser2": {"kappa": 1.0, "g": 0.125, "gamma1": 0.03,
                   "gamma2": 1e4, "gamma_perp": 1e4, "pump_rate_R": 1e6,
                   "pump_p": 1.0, "n_in": 400.0, "phi_in": 1.5707963267948966},
        "grid": {"omega_min": 0.0, "omega_max": 3.0, "points": 61},
        "dense_coding": {"reflectivity": 0.02, "photon_flux": 2.0,
                         "signal_bandwidth": 0.5},
        "output": {"path": "snr.csv", "format": "csv"}
    })");
    const RunConfig cfg = load_run_config(path);
    REQUIRE(cfg.operation.has_value());
    CHECK(*cfg.operation == "dense-coding-snr");
    REQUIRE(cfg.laser.has_value());
    CHECK(cfg.laser->pump_rate_R == 1.0e6);
    REQUIRE(cfg.laser2.has_value());
    CHECK(cfg.laser2->phi_in == 1.5707963267948966);
    REQUIRE(cfg.grid.has_value());
    CHECK(cfg.grid->points == 61);
    CHECK(cfg.grid->spacing == "linear");
    REQUIRE(cfg.dense_coding.has_value());
    CHECK(cfg.dense_coding->reflectivity == 0.02);
    REQUIRE(cfg.output.has_value());
    CHECK(cfg.output->path == "snr.csv");
    CHECK(cfg.output->format == "csv");
    CHECK_FALSE(cfg.sim.has_value());
    CHECK_FALSE(cfg.sweep.has_value());
    CHECK_NOTHROW(validate_config_for(cfg, "dense-coding-snr"));
    std::filesystem::remove(path);
}

TEST_CASE("config rejection cases") {
    CHECK_THROWS_AS(load_run_config("/nonexistent/sqlaser.json"), ConfigError);

    const std::string bad_json = temp_config("badjson", "{not json");
    CHECK_THROWS_AS(load_run_config(bad_json), ConfigError);
    std::filesystem::remove(bad_json);

    const std::string array_root = temp_config("arrayroot", "[1, 2]");
    CHECK_THROWS_AS(load_run_config(array_root), ConfigError);
    std::filesystem::remove(array_root);

    const std::string unknown_root =
        temp_config("unkroot", R"({"lazer": {}})");
    CHECK_THROWS_AS(load_run_config(unknown_root), ConfigError);
    std::filesystem::remove(unknown_root);

    const std::string unknown_grid = temp_config(
        "unkgrid",
        R"({"grid": {"omega_min": 0, "omega_max": 1, "points": 5,
                     "n_points": 5}})");
    CHECK_THROWS_AS(load_run_config(unknown_grid), ConfigError);
    std::filesystem::remove(unknown_grid);

    const std::string no_points = temp_config(
        "nopoints", R"({"grid": {"omega_min": 0, "omega_max": 1}})");
    CHECK_THROWS_AS(load_run_config(no_points), ConfigError);
    std::filesystem::remove(no_points);

    const std::string bad_spacing = temp_config(
        "badspacing",
        R"({"grid": {"omega_min": 0, "omega_max": 1, "points": 5,
                     "spacing": "quadratic"}})");
    CHECK_THROWS_AS(load_run_config(bad_spacing), ConfigError);
    std::filesystem::remove(bad_spacing);

    const std::string bad_format = temp_config(
        "badformat", R"({"output": {"path": "x", "format": "yaml"}})");
    CHECK_THROWS_AS(load_run_config(bad_format), ConfigError);
    std::filesystem::remove(bad_format);
}

TEST_CASE("operation gating") {
    RunConfig cfg;
    cfg.operation = "spectrum";
    CHECK_NOTHROW(validate_config_for(cfg, "spectrum"));
    CHECK_THROWS_AS(validate_config_for(cfg, "duan"), ConfigError);

    RunConfig unnamed;
    CHECK_THROWS_AS(validate_config_for(unnamed, "make-coffee"), ConfigError);
}

TEST_CASE("block shapes per subcommand") {
    RunConfig with_sim;
    with_sim.sim = SimConfig{};
    CHECK_THROWS_AS(validate_config_for(with_sim, "spectrum"), ConfigError);
    CHECK_NOTHROW(validate_config_for(with_sim, "simulate"));

    RunConfig no_sim;
    CHECK_THROWS_AS(validate_config_for(no_sim, "simulate"), ConfigError);

    RunConfig no_dc;
    no_dc.grid = GridSpec{0.0, 3.0, 5, "linear"};
    CHECK_THROWS_AS(validate_config_for(no_dc, "dense-coding-snr"),
                    ConfigError);

    RunConfig selftest_laser;
    selftest_laser.laser = LaserParams{};
    CHECK_THROWS_AS(validate_config_for(selftest_laser, "selftest"),
                    ConfigError);

    RunConfig sweep_only;
    sweep_only.sweep = SweepSpec{};
    CHECK_NOTHROW(validate_config_for(sweep_only, "smi-sweep"));
    CHECK_THROWS_AS(validate_config_for(sweep_only, "spectrum"), ConfigError);

    RunConfig laser2_only;
    laser2_only.laser2 = LaserParams{};
    CHECK_NOTHROW(validate_config_for(laser2_only, "duan"));
    CHECK_THROWS_AS(validate_config_for(laser2_only, "phase-variance"),
                    ConfigError);
}

TEST_CASE("grid resolution") {
    const OperatingPoint op = solve_steady_state(LaserParams{});

    const std::vector<double> fallback = resolve_grid(std::nullopt, op);
    CHECK(fallback == default_grid(op));

    GridSpec lin{0.0, 3.0, 61, "linear"};
    CHECK(resolve_grid(lin, op) == linear_grid(0.0, 3.0, 61));

    GridSpec log_spec{1e-3, 10.0, 8, "log-symmetric"};
    const std::vector<double> log_grid = resolve_grid(log_spec, op);
    CHECK(log_grid == log_symmetric_grid(1e-3, 10.0, 8));
    CHECK(log_grid.size() == 17);  // mirrored, zero included
}

TEST_CASE("sweep grids hit both endpoints exactly") {
    SweepSpec log_sweep;
    log_sweep.d_A_min = 0.1;
    log_sweep.d_A_max = 20.0;
    log_sweep.points = 64;
    const std::vector<double> lg = sweep_grid(log_sweep);
    REQUIRE(lg.size() == 64);
    CHECK(lg.front() == 0.1);
    CHECK(lg.back() == 20.0);
    for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] > lg[i - 1]);
    // Log spacing: ratios are constant to rounding.
    CHECK(lg[32] / lg[31] == doctest::Approx(lg[2] / lg[1]).epsilon(1e-12));

    SweepSpec lin_sweep;
    lin_sweep.d_A_min = 1.0;
    lin_sweep.d_A_max = 3.0;
    lin_sweep.points = 5;
    lin_sweep.spacing = "linear";
    const std::vector<double> ln = sweep_grid(lin_sweep);
    REQUIRE(ln.size() == 5);
    CHECK(ln.front() == 1.0);
    CHECK(ln.back() == 3.0);
    CHECK(ln[2] == doctest::Approx(2.0).epsilon(1e-15));

    SweepSpec bad = log_sweep;
    bad.points = 1;
    CHECK_THROWS_AS(sweep_grid(bad), InvalidParameter);
    bad = log_sweep;
    bad.d_A_min = 0.0;
    CHECK_THROWS_AS(sweep_grid(bad), InvalidParameter);
    bad = log_sweep;
    bad.d_A_max = bad.d_A_min;
    CHECK_THROWS_AS(sweep_grid(bad), InvalidParameter);
}

TEST_CASE("output path resolution honors the out-dir environment") {
    unsetenv("SQLASER_OUT_DIR");
    CHECK(resolve_output_path("") == "");
    CHECK(resolve_output_path("a/b.csv") == "a/b.csv");
    CHECK(resolve_output_path("/abs/b.csv") == "/abs/b.csv");

    setenv("SQLASER_OUT_DIR", "/tmp/sqlaser_outdir", 1);
    CHECK(resolve_output_path("b.csv") == "/tmp/sqlaser_outdir/b.csv");
    CHECK(resolve_output_path("/abs/b.csv") == "/abs/b.csv");

    setenv("SQLASER_OUT_DIR", "/tmp/sqlaser_outdir/", 1);
    CHECK(resolve_output_path("b.csv") == "/tmp/sqlaser_outdir/b.csv");
    unsetenv("SQLASER_OUT_DIR");
}

TEST_CASE("text file writer") {
    const auto path = std::filesystem::temp_directory_path() /
                      "sqlaser_cfgtest_write.txt";
    write_text_file(path.string(), "line\n");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "line\n");
    std::filesystem::remove(path);

    CHECK_THROWS_AS(write_text_file("/nonexistent_dir_xyz/file.txt", "x"),
                    ConfigError);
}
