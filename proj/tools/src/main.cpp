#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <iostream>
#include <utility>

#include "run_config.hpp"
#include "selftest.hpp"
#include "sqlaser/core_model.hpp"
#include "sqlaser/errors.hpp"
#include "sqlaser/langevin.hpp"
#include "sqlaser/protocols.hpp"
#include "sqlaser/spectra.hpp"
#include "sqlaser/transfer_model.hpp"

namespace {

using nlohmann::json;
using namespace sqlaser;
using namespace sqlaser::cli;

// ---------------------------------------------------------------------------
// flag groups (config file values first, flags win)

struct LaserFlags {
    std::array<double, 9> value{};
    std::array<CLI::Option*, 9> opt{};

    void attach(CLI::App* sub) {
        static constexpr std::array<std::pair<const char*, const char*>, 9>
            meta{{{"--kappa", "cavity decay rate"},
                  {"--g", "atom-field coupling"},
                  {"--gamma1", "upper level decay rate"},
                  {"--gamma2", "lower level decay rate"},
                  {"--gamma-perp", "polarization decay rate"},
                  {"--pump-rate", "mean pump rate R"},
                  {"--pump-p", "pump statistics parameter in [0, 1]"},
                  {"--n-in", "injected locking-field photon number"},
                  {"--phi-in", "injected locking-field phase"}}};
        for (std::size_t i = 0; i < meta.size(); ++i)
            opt[i] = sub->add_option(meta[i].first, value[i], meta[i].second);
    }

    void apply(LaserParams& p) const {
        const std::array<double LaserParams::*, 9> slots = {
            &LaserParams::kappa,        &LaserParams::g,
            &LaserParams::gamma1,       &LaserParams::gamma2,
            &LaserParams::gamma_perp,   &LaserParams::pump_rate_R,
            &LaserParams::pump_p,       &LaserParams::n_in,
            &LaserParams::phi_in};
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (opt[i] != nullptr && opt[i]->count() > 0) p.*slots[i] = value[i];
    }
};

struct GridFlags {
    GridSpec value;
    CLI::Option* min = nullptr;
    CLI::Option* max = nullptr;
    CLI::Option* points = nullptr;
    CLI::Option* spacing = nullptr;

    void attach(CLI::App* sub) {
        min = sub->add_option("--omega-min", value.omega_min,
                              "lowest grid frequency");
        max = sub->add_option("--omega-max", value.omega_max,
                              "highest grid frequency");
        points = sub->add_option("--points", value.points,
                                 "grid points (per side for log-symmetric)");
        spacing = sub->add_option("--spacing", value.spacing,
                                  "grid spacing: linear or log-symmetric")
                      ->check(CLI::IsMember({"linear", "log-symmetric"}));
    }

    bool touched() const {
        return min->count() || max->count() || points->count() ||
               spacing->count();
    }

    std::optional<GridSpec> merge(const std::optional<GridSpec>& base) const {
        if (!base && !touched()) return std::nullopt;
        GridSpec g = base.value_or(GridSpec{});
        if (min->count()) g.omega_min = value.omega_min;
        if (max->count()) g.omega_max = value.omega_max;
        if (points->count()) g.points = value.points;
        if (spacing->count()) g.spacing = value.spacing;
        if (g.points == 0)
            throw ConfigError(
                "grid incomplete: omega_min, omega_max, and points are all "
                "needed");
        return g;
    }
};

struct SimFlags {
    SimConfig value;
    std::string integrator;
    CLI::Option* dt = nullptr;
    CLI::Option* duration = nullptr;
    CLI::Option* segments = nullptr;
    CLI::Option* trajectories = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* window = nullptr;
    CLI::Option* stride = nullptr;
    CLI::Option* integ = nullptr;

    void attach(CLI::App* sub) {
        dt = sub->add_option("--dt", value.dt, "integration step");
        duration =
            sub->add_option("--duration", value.duration, "simulated time");
        segments = sub->add_option("--segments", value.n_segments,
                                   "Welch segments (>= 8)");
        trajectories = sub->add_option("--trajectories", value.n_trajectories,
                                       "independent trajectories");
        seed = sub->add_option("--seed", value.seed, "random seed");
        window = sub->add_option("--window", value.window,
                                 "taper: hann, hamming, boxcar")
                     ->check(CLI::IsMember({"hann", "hamming", "boxcar"}));
        stride = sub->add_option("--record-stride", value.record_stride,
                                 "raw steps per recorded sample (0 = auto)");
        integ = sub->add_option("--integrator", integrator,
                                "euler-maruyama or exact")
                    ->check(CLI::IsMember({"euler-maruyama", "exact"}));
    }

    void apply(SimConfig& cfg) const {
        if (dt->count()) cfg.dt = value.dt;
        if (duration->count()) cfg.duration = value.duration;
        if (segments->count()) cfg.n_segments = value.n_segments;
        if (trajectories->count()) cfg.n_trajectories = value.n_trajectories;
        if (seed->count()) cfg.seed = value.seed;
        if (window->count()) cfg.window = value.window;
        if (stride->count()) cfg.record_stride = value.record_stride;
        if (integ->count())
            cfg.integrator = integrator == "exact"
                                 ? SimConfig::Integrator::exact
                                 : SimConfig::Integrator::euler_maruyama;
    }
};

struct DcFlags {
    DenseCodingParams value;
    CLI::Option* reflectivity = nullptr;
    CLI::Option* flux = nullptr;
    CLI::Option* bandwidth = nullptr;

    void attach(CLI::App* sub) {
        reflectivity = sub->add_option("--reflectivity", value.reflectivity,
                                       "tap reflectivity in (0, 1)");
        flux = sub->add_option("--photon-flux", value.photon_flux,
                               "Alice mean photon flux");
        bandwidth = sub->add_option("--signal-bandwidth", value.signal_bandwidth,
                                    "Alice Gaussian signal bandwidth");
    }

    DenseCodingParams merge(const std::optional<DenseCodingParams>& base,
                            const char* command) const {
        const bool all_flags =
            reflectivity->count() && flux->count() && bandwidth->count();
        if (!base && !all_flags)
            throw ConfigError(
                std::string(command) +
                " needs a dense_coding config block or all of "
                "--reflectivity, --photon-flux, --signal-bandwidth");
        DenseCodingParams dc = base.value_or(DenseCodingParams{});
        if (reflectivity->count()) dc.reflectivity = value.reflectivity;
        if (flux->count()) dc.photon_flux = value.photon_flux;
        if (bandwidth->count()) dc.signal_bandwidth = value.signal_bandwidth;
        return dc;
    }
};

struct SweepFlags {
    SweepSpec value;
    CLI::Option* reflectivity = nullptr;
    CLI::Option* script_P = nullptr;
    CLI::Option* d_min = nullptr;
    CLI::Option* d_max = nullptr;
    CLI::Option* points = nullptr;
    CLI::Option* spacing = nullptr;

    void attach(CLI::App* sub) {
        reflectivity = sub->add_option("--reflectivity", value.reflectivity,
                                       "tap reflectivity in (0, 1)");
        script_P = sub->add_option("--script-P", value.script_P,
                                   "dimensionless flux 2*pi*P/kappa");
        d_min = sub->add_option("--d-A-min", value.d_A_min,
                                "smallest dimensionless bandwidth");
        d_max = sub->add_option("--d-A-max", value.d_A_max,
                                "largest dimensionless bandwidth");
        points = sub->add_option("--points", value.points, "sweep points");
        spacing = sub->add_option("--spacing", value.spacing,
                                  "sweep spacing: log or linear")
                      ->check(CLI::IsMember({"log", "linear"}));
    }

    SweepSpec merge(const std::optional<SweepSpec>& base) const {
        SweepSpec s = base.value_or(SweepSpec{});
        if (reflectivity->count()) s.reflectivity = value.reflectivity;
        if (script_P->count()) s.script_P = value.script_P;
        if (d_min->count()) s.d_A_min = value.d_A_min;
        if (d_max->count()) s.d_A_max = value.d_A_max;
        if (points->count()) s.points = value.points;
        if (spacing->count()) s.spacing = value.spacing;
        return s;
    }
};

struct OutputFlags {
    OutputSpec value;
    CLI::Option* path = nullptr;
    CLI::Option* format = nullptr;

    void attach(CLI::App* sub) {
        path = sub->add_option("-o,--output", value.path,
                               "output file (default standard output)");
        format = sub->add_option("--format", value.format,
                                 "output format: csv or json")
                     ->check(CLI::IsMember({"csv", "json"}));
    }

    OutputSpec merge(const std::optional<OutputSpec>& base) const {
        OutputSpec o = base.value_or(OutputSpec{});
        if (path->count()) o.path = value.path;
        if (format->count()) o.format = value.format;
        return o;
    }
};

// ---------------------------------------------------------------------------
// shared state and helpers

struct CmdState {
    const char* name = "";
    std::string config_path;
    RunConfig cfg;
    LaserFlags laser;
    GridFlags grid;
    SimFlags sim;
    DcFlags dc;
    SweepFlags sweep;
    OutputFlags output;
    std::string variant;
    double threshold = 1.0;
    bool bits = false;

    void load_config() {
        if (config_path.empty()) return;
        cfg = load_run_config(config_path);
        validate_config_for(cfg, name);
    }

    LaserParams resolved_laser() const {
        LaserParams p = cfg.laser.value_or(LaserParams{});
        laser.apply(p);
        return p;
    }

    EprSource resolved_source() const {
        const LaserParams p = resolved_laser();
        if (cfg.laser2) return EprSource::create(p, *cfg.laser2);
        return EprSource::create(p);
    }

    std::vector<double> resolved_grid(const OperatingPoint& op) const {
        return sqlaser::cli::resolve_grid(grid.merge(cfg.grid), op);
    }

    OutputSpec resolved_output() const { return output.merge(cfg.output); }

    SpectrumVariant variant_or(SpectrumVariant fallback) const {
        if (variant.empty()) return fallback;
        return variant == "full" ? SpectrumVariant::full
                                 : SpectrumVariant::saturated;
    }
};

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

using Columns = std::vector<std::pair<std::string, const std::vector<double>*>>;

std::string table_csv(const Columns& cols) {
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c > 0) out += ',';
        out += cols[c].first;
    }
    out += '\n';
    const std::size_t rows = cols.front().second->size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c > 0) out += ',';
            out += format_number((*cols[c].second)[r]);
        }
        out += '\n';
    }
    return out;
}

json columns_json(const Columns& cols) {
    json j = json::object();
    for (const auto& [name, values] : cols) j[name] = *values;
    return j;
}

void emit_text(const OutputSpec& out, const std::string& text) {
    if (out.path.empty())
        std::cout << text;
    else
        write_text_file(resolve_output_path(out.path), text);
}

void emit_table(const CmdState& s, const Columns& cols, json meta) {
    const OutputSpec out = s.resolved_output();
    const std::string fmt = out.format.empty() ? "csv" : out.format;
    if (fmt == "csv") {
        emit_text(out, table_csv(cols));
    } else {
        json j = columns_json(cols);
        j.update(meta);
        emit_text(out, j.dump(2) + "\n");
    }
}

void emit_json_only(const CmdState& s, const json& j) {
    const OutputSpec out = s.resolved_output();
    if (!out.format.empty() && out.format != "json")
        throw ConfigError(std::string(s.name) + " emits JSON only");
    emit_text(out, j.dump(2) + "\n");
}

json regime_json(const OperatingPoint& op) {
    auto one = [](const RegimeCheck& c) {
        return json{{"ok", c.ok}, {"ratio", c.ratio}};
    };
    return json{{"adiabatic", one(op.flags.adiabatic)},
                {"saturation", one(op.flags.saturation)},
                {"weak_injection", one(op.flags.weak_injection)},
                {"macroscopic", one(op.flags.macroscopic)}};
}

json quadrature_json(const QuadratureResult& q) {
    return json{{"value", q.value},
                {"error_estimate", q.error_estimate},
                {"subdivisions", q.subdivisions},
                {"converged", q.converged}};
}

// ---------------------------------------------------------------------------
// subcommand handlers

void run_steady_state(CmdState& s) {
    s.load_config();
    const LaserParams p = s.resolved_laser();
    const OperatingPoint op = solve_steady_state(p);
    json j{{"params", json::parse(params_to_json(p))},
           {"n", op.n},
           {"sqrt_n", std::sqrt(op.n)},
           {"mu", op.mu},
           {"N1", op.N1},
           {"c", op.c},
           {"Gamma1", op.Gamma1},
           {"cn", op.cn()},
           {"regime", regime_json(op)},
           {"regime_warnings", validate_regime(op)}};
    emit_json_only(s, j);
}

void run_spectrum(CmdState& s) {
    s.load_config();
    const OperatingPoint op = solve_steady_state(s.resolved_laser());
    const std::vector<double> grid = s.resolved_grid(op);
    const SpectrumVariant variant = s.variant_or(SpectrumVariant::full);
    const SpectralCurve x = intracavity_variance_x(op, grid, variant);
    const SpectralCurve y = intracavity_variance_y(op, grid);
    const NormallyOrderedVariances no =
        normally_ordered_variances(op, grid, variant);
    emit_table(s,
               {{"omega", &grid},
                {"x", &x.value},
                {"y", &y.value},
                {"x_normal", &no.x.value},
                {"y_normal", &no.y.value}},
               json{{"variant", variant == SpectrumVariant::full
                                    ? "full"
                                    : "saturated"}});
}

void run_external_spectrum(CmdState& s) {
    s.load_config();
    const OperatingPoint op = solve_steady_state(s.resolved_laser());
    const std::vector<double> grid = s.resolved_grid(op);
    const SpectrumVariant variant = s.variant_or(SpectrumVariant::saturated);
    const ExternalVariances ext = external_variances(op, grid, variant);
    emit_table(s,
               {{"omega", &grid}, {"X", &ext.X.value}, {"Y", &ext.Y.value}},
               json{{"variant", variant == SpectrumVariant::full
                                    ? "full"
                                    : "saturated"}});
}

void run_phase_variance(CmdState& s) {
    s.load_config();
    const OperatingPoint op = solve_steady_state(s.resolved_laser());
    const PhaseVariance pv = phase_variance(op);
    emit_json_only(s, json{{"dy2", pv.dy2},
                           {"dphi2", pv.dphi2},
                           {"dphi2_leading_order", pv.dphi2_leading_order},
                           {"ratio_to_leading_order",
                            pv.ratio_to_leading_order},
                           {"quadrature", quadrature_json(pv.quadrature)}});
}

json sim_meta(const LaserParams& p, const SimResult& r) {
    return json{
        {"laser", json::parse(params_to_json(p))},
        {"sim", json::parse(sim_config_to_json(r.config))},
        {"seed", r.config.seed},
        {"record_stride", r.record_stride},
        {"steps_per_trajectory", r.steps_per_trajectory},
        {"plan",
         {{"segment_length", r.plan.segment_length},
          {"hop", r.plan.hop},
          {"segments_per_trajectory", r.plan.n_segments_used},
          {"sample_interval", r.plan.sample_interval},
          {"n_bins", r.plan.n_bins()}}}};
}

void run_simulate(CmdState& s) {
    s.load_config();
    SimConfig sim = s.cfg.sim.value_or(SimConfig{});
    s.sim.apply(sim);
    if (!(sim.dt > 0.0) || !(sim.duration > 0.0))
        throw ConfigError(
            "simulate needs dt and duration (sim config block or --dt and "
            "--duration)");
    const LaserParams p = s.resolved_laser();
    const OperatingPoint op = solve_steady_state(p);
    const SimResult result = simulate(op, sim);

    static constexpr std::array<std::pair<int, int>, 6> pairs{
        {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};
    static constexpr std::array<const char*, 6> pair_names{
        "xx", "xy", "xN", "yy", "yN", "NN"};

    Columns cols{{"omega", &result.omega}};
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        cols.emplace_back(std::string("s_") + pair_names[k],
                          &result.estimated[static_cast<std::size_t>(i)]
                                           [static_cast<std::size_t>(j)]);
        cols.emplace_back(std::string("se_") + pair_names[k],
                          &result.standard_error[static_cast<std::size_t>(i)]
                                                [static_cast<std::size_t>(j)]);
    }

    const OutputSpec out = s.resolved_output();
    const std::string fmt = out.format.empty() ? "csv" : out.format;
    if (fmt == "json") {
        json j = columns_json(cols);
        j["meta"] = sim_meta(p, result);
        emit_text(out, j.dump(2) + "\n");
        return;
    }
    emit_text(out, table_csv(cols));
    // Sidecar with the config echo next to file output. Wall time is kept
    // out of both files so reruns with one seed stay bit-identical.
    if (!out.path.empty()) {
        write_text_file(resolve_output_path(out.path) + ".meta.json",
                        sim_meta(p, result).dump(2) + "\n");
    }
}

void run_duan(CmdState& s) {
    s.load_config();
    const EprSource src = s.resolved_source();
    const std::vector<double> grid = s.resolved_grid(src.laser1);
    const SpectrumVariant variant = s.variant_or(SpectrumVariant::saturated);
    const SpectralCurve curve = duan_combined_variance(src, grid, variant);
    const DuanBand band = duan_entangled_band(src, s.threshold);

    const OutputSpec out = s.resolved_output();
    const std::string fmt = out.format.empty() ? "json" : out.format;
    if (fmt == "csv") {
        emit_text(out, table_csv({{"omega", &grid}, {"value", &curve.value}}));
        return;
    }
    json band_json{{"empty", band.empty}, {"everywhere", band.everywhere}};
    if (band.empty || band.everywhere)
        band_json["omega_upper"] = nullptr;
    else
        band_json["omega_upper"] = band.omega_upper;
    emit_text(out, json{{"threshold", s.threshold},
                        {"band", band_json},
                        {"omega", grid},
                        {"value", curve.value}}
                           .dump(2) +
                       "\n");
}

void run_dense_coding_snr(CmdState& s) {
    s.load_config();
    const EprSource src = s.resolved_source();
    const DenseCodingParams dc = s.dc.merge(s.cfg.dense_coding, s.name);
    const std::vector<double> grid = s.resolved_grid(src.laser1);
    const SpectrumVariant variant = s.variant_or(SpectrumVariant::saturated);
    const SpectralCurve snr = snr_spectrum(src, dc, grid, variant);
    const SpectralCurve reduced = snr_spectrum_reduced(src, dc, grid);
    const SpectralCurve signal = alice_signal_spectrum(dc, grid);
    emit_table(s,
               {{"omega", &grid},
                {"snr", &snr.value},
                {"snr_reduced", &reduced.value},
                {"signal", &signal.value}},
               json{{"dense_coding",
                     json::parse(dense_coding_to_json(dc))}});
}

void run_dense_coding_smi(CmdState& s) {
    s.load_config();
    const EprSource src = s.resolved_source();
    const DenseCodingParams dc = s.dc.merge(s.cfg.dense_coding, s.name);
    const ShannonInformation info = shannon_information(src, dc, s.bits);
    const double kappa = src.laser1.params.kappa;
    emit_json_only(
        s, json{{"raw", info.raw},
                {"scaled_uniform", info.scaled_uniform},
                {"scaled_mixed", info.scaled_mixed},
                {"bits", info.bits},
                {"d_A", dc.d_A(kappa)},
                {"script_P", dc.script_P(kappa)},
                {"quadrature", quadrature_json(info.quadrature)}});
}

void run_smi_sweep(CmdState& s) {
    s.load_config();
    const EprSource src = s.resolved_source();
    const SweepSpec spec = s.sweep.merge(s.cfg.sweep);
    const std::vector<double> grid = sweep_grid(spec);
    const std::vector<SmiSweepPoint> points =
        smi_sweep(src, spec.reflectivity, spec.script_P, grid);

    std::vector<double> d_A(points.size());
    std::vector<double> smi(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        d_A[i] = points[i].d_A;
        smi[i] = points[i].smi;
    }
    const double mu = src.laser1.mu;
    emit_table(s, {{"d_A", &d_A}, {"smi", &smi}},
               json{{"reflectivity", spec.reflectivity},
                    {"script_P", spec.script_P},
                    {"lambda", 0.25 * mu * mu}});
}

void run_teleport_fidelity(CmdState& s) {
    s.load_config();
    const EprSource src = s.resolved_source();
    const std::vector<double> grid = s.resolved_grid(src.laser1);
    const SpectrumVariant variant = s.variant_or(SpectrumVariant::saturated);
    const SpectralCurve fid = teleport_fidelity_spectrum(src, grid, variant);
    const SpectralCurve closed = teleport_fidelity_closed(src, grid);
    emit_table(s,
               {{"omega", &grid},
                {"fidelity", &fid.value},
                {"fidelity_closed", &closed.value}},
               json::object());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Analytics and Monte-Carlo cross-checks for a phase-locked "
        "sub-Poissonian laser: steady state, squeezing spectra, "
        "entanglement, dense coding, teleportation"};
    app.require_subcommand(1);

    std::deque<CmdState> states;
    int exit_code = 0;

    auto make = [&](const char* name, const char* desc) -> CmdState& {
        CLI::App* sub = app.add_subcommand(name, desc);
        states.emplace_back();
        CmdState& st = states.back();
        st.name = name;
        sub->add_option("-c,--config", st.config_path, "JSON config file");
        st.output.attach(sub);
        return st;
    };
    auto on = [&](const char* name, auto handler) -> CLI::App* {
        CLI::App* sub = app.get_subcommand(name);
        CmdState& st = states.back();
        sub->callback([&st, handler] { handler(st); });
        return sub;
    };

    {
        CmdState& st = make("steady-state",
                            "solve the semiclassical working point");
        st.laser.attach(app.get_subcommand("steady-state"));
        on("steady-state", run_steady_state);
    }
    {
        CmdState& st = make("spectrum", "intracavity quadrature spectra");
        CLI::App* sub = app.get_subcommand("spectrum");
        st.laser.attach(sub);
        st.grid.attach(sub);
        sub->add_option("--variant", st.variant,
                        "closed-form family: full or saturated")
            ->check(CLI::IsMember({"full", "saturated"}));
        on("spectrum", run_spectrum);
    }
    {
        CmdState& st = make("external-spectrum",
                            "emitted-field quadrature spectra");
        CLI::App* sub = app.get_subcommand("external-spectrum");
        st.laser.attach(sub);
        st.grid.attach(sub);
        sub->add_option("--variant", st.variant,
                        "closed-form family: full or saturated")
            ->check(CLI::IsMember({"full", "saturated"}));
        on("external-spectrum", run_external_spectrum);
    }
    {
        CmdState& st = make("phase-variance",
                            "locked-phase variance and diagnostics");
        st.laser.attach(app.get_subcommand("phase-variance"));
        on("phase-variance", run_phase_variance);
    }
    {
        CmdState& st = make("simulate",
                            "Monte-Carlo spectra of the linearized model");
        CLI::App* sub = app.get_subcommand("simulate");
        st.laser.attach(sub);
        st.sim.attach(sub);
        on("simulate", run_simulate);
    }
    {
        CmdState& st = make("duan", "two-mode combined variance and band");
        CLI::App* sub = app.get_subcommand("duan");
        st.laser.attach(sub);
        st.grid.attach(sub);
        sub->add_option("--threshold", st.threshold,
                        "separability threshold (default 1)");
        sub->add_option("--variant", st.variant,
                        "closed-form family: full or saturated")
            ->check(CLI::IsMember({"full", "saturated"}));
        on("duan", run_duan);
    }
    {
        CmdState& st = make("dense-coding-snr", "homodyne SNR spectrum");
        CLI::App* sub = app.get_subcommand("dense-coding-snr");
        st.laser.attach(sub);
        st.grid.attach(sub);
        st.dc.attach(sub);
        sub->add_option("--variant", st.variant,
                        "closed-form family: full or saturated")
            ->check(CLI::IsMember({"full", "saturated"}));
        on("dense-coding-snr", run_dense_coding_snr);
    }
    {
        CmdState& st = make("dense-coding-smi",
                            "Shannon mutual information of the channel");
        CLI::App* sub = app.get_subcommand("dense-coding-smi");
        st.laser.attach(sub);
        st.dc.attach(sub);
        sub->add_flag("--bits", st.bits, "report bits instead of nats");
        on("dense-coding-smi", run_dense_coding_smi);
    }
    {
        CmdState& st = make("smi-sweep",
                            "information vs dimensionless signal bandwidth");
        CLI::App* sub = app.get_subcommand("smi-sweep");
        st.laser.attach(sub);
        st.sweep.attach(sub);
        on("smi-sweep", run_smi_sweep);
    }
    {
        CmdState& st = make("teleport-fidelity",
                            "teleportation fidelity spectrum");
        CLI::App* sub = app.get_subcommand("teleport-fidelity");
        st.laser.attach(sub);
        st.grid.attach(sub);
        sub->add_option("--variant", st.variant,
                        "closed-form family: full or saturated")
            ->check(CLI::IsMember({"full", "saturated"}));
        on("teleport-fidelity", run_teleport_fidelity);
    }
    {
        make("selftest", "analytic-vs-Monte-Carlo certification run");
        CLI::App* sub = app.get_subcommand("selftest");
        sub->callback([&exit_code] { exit_code = run_selftest(std::cout); });
    }
    {
        CmdState& st = make("check-config", "validate a config file");
        CLI::App* sub = app.get_subcommand("check-config");
        sub->add_option("path", st.config_path, "JSON config file")
            ->required();
        sub->add_option("--operation", st.variant,
                        "subcommand to validate the config against");
        sub->callback([&st] {
            const RunConfig cfg = load_run_config(st.config_path);
            std::string operation = st.variant;
            if (operation.empty() && cfg.operation) operation = *cfg.operation;
            if (!operation.empty()) validate_config_for(cfg, operation);
            json j{{"ok", true}, {"path", st.config_path}};
            j["operation"] = operation.empty() ? json() : json(operation);
            std::cout << j.dump(2) << "\n";
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        json err{{"error", {{"code", "Usage"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const ValidationError& e) {
        json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 1;
    } catch (const NumericalError& e) {
        json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
        std::cerr << err.dump(2) << "\n";
        return 2;
    }
    return exit_code;
}
