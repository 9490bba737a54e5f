#include "selftest.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "sqlaser/langevin.hpp"
#include "sqlaser/spectra.hpp"
#include "sqlaser/transfer_model.hpp"

namespace sqlaser::cli {

namespace {

struct Tally {
    std::ostream& out;
    bool all_ok = true;

    void line(const char* name, bool ok, double value, double limit) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "selftest: %-42s %.3e (limit %.1e) %s\n",
                      name, value, limit, ok ? "PASS" : "FAIL");
        out << buf;
        all_ok = all_ok && ok;
    }
};

// Relative RMS deviation between an estimate and a reference over the bins
// with |omega| <= band, skipping the DC bin (nulled by per-segment mean
// removal, so it carries no spectral information).
double rms_deviation(const std::vector<double>& omega,
                     const std::vector<double>& est,
                     const std::vector<double>& ref, double band) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < omega.size() && omega[i] <= band; ++i) {
        const double rel = (est[i] - ref[i]) / ref[i];
        sum += rel * rel;
        ++count;
    }
    return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace

int run_selftest(std::ostream& out) {
    // Pinned point chosen for exact arithmetic and a fast run: the default
    // rates with R = 8000 and n_in = 400 give sqrt(n) = (20 + 180)/2 = 100,
    // so n = 1e4 and mu = 0.2 exactly.
    LaserParams params;
    params.pump_rate_R = 8000.0;
    params.n_in = 400.0;
    const OperatingPoint op = solve_steady_state(params);

    Tally t{out};
    t.line("steady state photon number |n/1e4 - 1|",
           std::abs(op.n / 1.0e4 - 1.0) < 1e-12,
           std::abs(op.n / 1.0e4 - 1.0), 1e-12);
    t.line("steady state injection ratio |mu - 0.2|",
           std::abs(op.mu - 0.2) < 1e-12, std::abs(op.mu - 0.2), 1e-12);

    const TransferModel model = TransferModel::for_operating_point(op);

    SimConfig cfg;
    cfg.dt = 5e-3;
    // Long enough that the Welch segment (power of two under 2T/67) resolves
    // the population line of half-width Gamma1 = 0.061: bin spacing 0.045.
    cfg.duration = 8000.0;
    cfg.n_segments = 64;
    cfg.n_trajectories = 4;
    cfg.seed = 20240817;
    const SimResult sim = simulate(op, cfg);

    const SpectralMatrix analytic = general_spectrum(model, sim.omega);
    const SpectralCurve x_closed =
        intracavity_variance_x(op, sim.omega, SpectrumVariant::full);
    const SpectralCurve y_closed = intracavity_variance_y(op, sim.omega);

    // Closed forms against the transfer-matrix evaluation (pure algebra,
    // no Monte-Carlo error).
    double worst = 0.0;
    for (std::size_t i = 0; i < sim.omega.size(); ++i) {
        worst = std::max(worst, std::abs(analytic.value[0][0][i] /
                                             x_closed.value[i] -
                                         1.0));
        worst = std::max(worst, std::abs(analytic.value[1][1][i] /
                                             y_closed.value[i] -
                                         1.0));
    }
    t.line("closed forms vs transfer matrix, max rel", worst < 1e-10, worst,
           1e-10);

    const double band = 3.0 * params.kappa;
    const double rms_x = rms_deviation(sim.omega, sim.estimated[0][0],
                                       analytic.value[0][0], band);
    const double rms_y = rms_deviation(sim.omega, sim.estimated[1][1],
                                       analytic.value[1][1], band);
    const double rms_n = rms_deviation(sim.omega, sim.estimated[2][2],
                                       analytic.value[2][2], band);
    t.line("Monte-Carlo (x,x) RMS over |w|<=3k", rms_x < 0.12, rms_x, 0.12);
    t.line("Monte-Carlo (y,y) RMS over |w|<=3k", rms_y < 0.12, rms_y, 0.12);
    t.line("Monte-Carlo (N,N) RMS over |w|<=3k", rms_n < 0.12, rms_n, 0.12);

    out << (t.all_ok ? "selftest: all checks passed\n"
                     : "selftest: FAILURES above\n");
    return t.all_ok ? 0 : 2;
}

}  // namespace sqlaser::cli
