#include "sqlaser/langevin.hpp"

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqlaser/errors.hpp"
#include "sqlaser/rng.hpp"

namespace sqlaser {

namespace {

struct StepOperator {
    // v_{k+1} = m * v_k + l * z_k with z_k standard normal.
    Eigen::Matrix3d m;
    Eigen::Matrix3d l;
};

StepOperator make_step_operator(const TransferModel& model,
                                SimConfig::Integrator integrator, double dt) {
    StepOperator step;
    if (integrator == SimConfig::Integrator::euler_maruyama) {
        step.m = Eigen::Matrix3d::Identity() + model.drift * dt;
        step.l = semidefinite_cholesky(model.noise.sigma, "noise covariance") *
                 std::sqrt(dt);
    } else {
        // Exact discretization: the transition is expm(A dt) and the step
        // noise has covariance Q = C - expm(A dt) C expm(A dt)^T with C the
        // stationary covariance, so each step is exact in distribution.
        step.m = (model.drift * dt).exp();
        const Eigen::Matrix3d c = stationary_covariance(model);
        const Eigen::Matrix3d q = c - step.m * c * step.m.transpose();
        step.l = semidefinite_cholesky(q, "exact step covariance");
    }
    return step;
}

void check_step_size(const TransferModel& model, double dt) {
    const double rate = model.spectral_radius();
    if (dt * rate > 0.01 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " too large: fastest drift eigenrate "
            << rate << " requires dt <= " << 0.01 / rate;
        throw StepTooLarge(msg.str());
    }
}

std::size_t auto_record_stride(const TransferModel& model, double dt) {
    // Keep the decimated Nyquist rate pi/(stride*dt) at least 64 times the
    // fastest eigenrate so every spectral feature stays far from the fold.
    const double rate = model.spectral_radius();
    const double cap = std::numbers::pi / (64.0 * rate * dt);
    if (cap <= 1.0) return 1;
    return static_cast<std::size_t>(cap);
}

// Squared magnitude of the boxcar decimation response,
// D(w) = sin(w*stride*dt/2) / (stride * sin(w*dt/2)).
double boxcar_response_sq(double omega, std::size_t stride, double dt) {
    if (omega == 0.0 || stride == 1) return 1.0;
    const double s = static_cast<double>(stride);
    const double num = std::sin(0.5 * omega * s * dt);
    const double den = s * std::sin(0.5 * omega * dt);
    const double d = num / den;
    return d * d;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidParameter("dt must be positive and finite");
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw InvalidParameter("duration must be positive and finite");
    if (n_segments < 8)
        throw InvalidParameter("n_segments must be at least 8");
    if (n_trajectories < 1)
        throw InvalidParameter("n_trajectories must be at least 1");
    window_from_name(window);
}

SimConfig sim_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("simulation config must be a JSON object");

    static constexpr const char* known[] = {
        "dt",   "duration",       "n_segments",    "window",
        "seed", "n_trajectories", "record_stride", "integrator"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown simulation config field '" + key + "'");
    }

    SimConfig cfg;
    auto number = [&](const char* name, double& out, bool required) {
        if (!j.contains(name)) {
            if (required) throw ConfigError(std::string("missing field '") + name + "'");
            return;
        }
        if (!j[name].is_number())
            throw ConfigError(std::string("field '") + name + "' must be a number");
        out = j[name].get<double>();
    };
    auto count = [&](const char* name, std::size_t& out) {
        if (!j.contains(name)) return;
        if (!j[name].is_number_unsigned())
            throw ConfigError(std::string("field '") + name +
                              "' must be a non-negative integer");
        out = j[name].get<std::size_t>();
    };
    number("dt", cfg.dt, true);
    number("duration", cfg.duration, true);
    count("n_segments", cfg.n_segments);
    count("n_trajectories", cfg.n_trajectories);
    count("record_stride", cfg.record_stride);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("field 'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("window")) {
        if (!j["window"].is_string())
            throw ConfigError("field 'window' must be a string");
        cfg.window = j["window"].get<std::string>();
    }
    if (j.contains("integrator")) {
        if (!j["integrator"].is_string())
            throw ConfigError("field 'integrator' must be a string");
        const std::string name = j["integrator"].get<std::string>();
        if (name == "euler-maruyama" || name == "euler")
            cfg.integrator = SimConfig::Integrator::euler_maruyama;
        else if (name == "exact")
            cfg.integrator = SimConfig::Integrator::exact;
        else
            throw ConfigError("unknown integrator '" + name +
                              "' (expected euler-maruyama or exact)");
    }
    try {
        cfg.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string sim_config_to_json(const SimConfig& cfg) {
    nlohmann::json j;
    j["dt"] = cfg.dt;
    j["duration"] = cfg.duration;
    j["n_segments"] = cfg.n_segments;
    j["window"] = cfg.window;
    j["seed"] = cfg.seed;
    j["n_trajectories"] = cfg.n_trajectories;
    j["record_stride"] = cfg.record_stride;
    j["integrator"] = cfg.integrator == SimConfig::Integrator::exact
                          ? "exact"
                          : "euler-maruyama";
    return j.dump(2) + "\n";
}

SpectralCurve SimResult::curve(int i, int j) const {
    SpectralCurve out;
    out.omega = omega;
    out.value = estimated[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

SpectralCurve SimResult::error_curve(int i, int j) const {
    SpectralCurve out;
    out.omega = omega;
    out.value =
        standard_error[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

SimResult simulate_model(const TransferModel& model, const SimConfig& cfg) {
    const auto start_time = std::chrono::steady_clock::now();
    cfg.validate();
    if (!model.stable()) {
        throw UnstableDrift(
            "drift matrix has an eigenvalue with non-negative real part");
    }
    check_step_size(model, cfg.dt);

    const std::size_t stride = cfg.record_stride > 0
                                   ? cfg.record_stride
                                   : auto_record_stride(model, cfg.dt);
    const auto raw_steps =
        static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
    const std::size_t n_rec = raw_steps / stride;
    const double dt_rec = static_cast<double>(stride) * cfg.dt;

    const WelchPlan plan = WelchPlan::create(n_rec, cfg.n_segments, dt_rec);
    CrossSpectrumEstimator estimator(plan, window_from_name(cfg.window));

    const StepOperator step = make_step_operator(model, cfg.integrator, cfg.dt);
    const Eigen::Matrix3d init_l =
        semidefinite_cholesky(stationary_covariance(model),
                              "stationary covariance");

    // Unpack the matrices once; the inner loop runs ~1e8 times.
    const double m00 = step.m(0, 0), m01 = step.m(0, 1), m02 = step.m(0, 2);
    const double m10 = step.m(1, 0), m11 = step.m(1, 1), m12 = step.m(1, 2);
    const double m20 = step.m(2, 0), m21 = step.m(2, 1), m22 = step.m(2, 2);
    const double l00 = step.l(0, 0);
    const double l10 = step.l(1, 0), l11 = step.l(1, 1);
    const double l20 = step.l(2, 0), l21 = step.l(2, 1), l22 = step.l(2, 2);
    const double inv_stride = 1.0 / static_cast<double>(stride);

    std::vector<double> rec0(n_rec), rec1(n_rec), rec2(n_rec);
    SplitMix64 stream_seeds(cfg.seed);

    for (std::size_t traj = 0; traj < cfg.n_trajectories; ++traj) {
        NormalSampler normals(stream_seeds.next());

        Eigen::Vector3d z(normals.next(), normals.next(), normals.next());
        const Eigen::Vector3d v0 = init_l * z;
        double s0 = v0(0), s1 = v0(1), s2 = v0(2);

        for (std::size_t block = 0; block < n_rec; ++block) {
            double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0;
            for (std::size_t k = 0; k < stride; ++k) {
                const double g0 = normals.next();
                const double g1 = normals.next();
                const double g2 = normals.next();
                const double t0 = m00 * s0 + m01 * s1 + m02 * s2 + l00 * g0;
                const double t1 =
                    m10 * s0 + m11 * s1 + m12 * s2 + l10 * g0 + l11 * g1;
                const double t2 = m20 * s0 + m21 * s1 + m22 * s2 + l20 * g0 +
                                  l21 * g1 + l22 * g2;
                s0 = t0;
                s1 = t1;
                s2 = t2;
                acc0 += s0;
                acc1 += s1;
                acc2 += s2;
            }
            rec0[block] = acc0 * inv_stride;
            rec1[block] = acc1 * inv_stride;
            rec2[block] = acc2 * inv_stride;
        }
        estimator.add_trajectory({rec0.data(), rec1.data(), rec2.data()},
                                 n_rec);
    }

    SimResult result;
    result.omega = plan.omega_grid();
    result.config = cfg;
    result.plan = plan;
    result.record_stride = stride;
    result.steps_per_trajectory = n_rec * stride;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            auto est = estimator.mean(i, j);
            auto se = estimator.standard_error(i, j);
            for (std::size_t k = 0; k < est.size(); ++k) {
                const double comp =
                    boxcar_response_sq(result.omega[k], stride, cfg.dt);
                est[k] /= comp;
                se[k] /= comp;
            }
            result.estimated[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)] = std::move(est);
            result.standard_error[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(j)] = std::move(se);
        }
    }
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_time)
            .count();
    return result;
}

SimResult simulate(const OperatingPoint& op, const SimConfig& cfg) {
    cfg.validate();
    if (op.mu > 0.0) {
        const double needed =
            50.0 * 2.0 * std::numbers::pi / (op.params.kappa * op.mu);
        if (cfg.duration < needed) {
            std::ostringstream msg;
            msg << "duration " << cfg.duration
                << " too short to resolve the locking line of half-width "
                << 0.5 * op.params.kappa * op.mu << "; need at least "
                << needed;
            throw InvalidParameter(msg.str());
        }
    }
    return simulate_model(TransferModel::for_operating_point(op), cfg);
}

std::vector<std::array<double, 3>> integrate_path(
    const TransferModel& model, const std::array<double, 3>& initial,
    double dt, std::size_t n_steps, SimConfig::Integrator integrator,
    std::uint64_t seed) {
    if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
    check_step_size(model, dt);
    StepOperator step;
    if (integrator == SimConfig::Integrator::exact && !model.stable())
        throw UnstableDrift("exact integrator needs a stable drift");
    step = make_step_operator(model, integrator, dt);

    NormalSampler normals(SplitMix64(seed).next());
    std::vector<std::array<double, 3>> path;
    path.reserve(n_steps + 1);
    path.push_back(initial);
    Eigen::Vector3d v(initial[0], initial[1], initial[2]);
    for (std::size_t k = 0; k < n_steps; ++k) {
        Eigen::Vector3d z(normals.next(), normals.next(), normals.next());
        v = step.m * v + step.l * z;
        path.push_back({v(0), v(1), v(2)});
    }
    return path;
}

}  // namespace sqlaser
