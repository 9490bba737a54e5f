#include <benchmark/benchmark.h>

#include <cstdint>
#include <numbers>
#include <vector>

#include "sqlaser/core_model.hpp"
#include "sqlaser/langevin.hpp"
#include "sqlaser/protocols.hpp"
#include "sqlaser/spectra.hpp"
#include "sqlaser/spectral_curve.hpp"
#include "sqlaser/transfer_model.hpp"

namespace {

using namespace sqlaser;

// Closed-form quadrature spectrum, the hot path of every sweep the CLI runs.
void bm_closed_spectrum(benchmark::State& state) {
    const OperatingPoint op = solve_steady_state(LaserParams{});
    const std::vector<double> grid = linear_grid(-5.0, 5.0, 1001);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            intracavity_variance_x(op, grid, SpectrumVariant::full));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(bm_closed_spectrum)->Unit(benchmark::kMicrosecond);

// Direct matrix route: one complex 3x3 solve per frequency.
void bm_general_spectrum(benchmark::State& state) {
    const OperatingPoint op = solve_steady_state(LaserParams{});
    const TransferModel model = TransferModel::for_operating_point(op);
    const std::vector<double> grid = linear_grid(-5.0, 5.0, 257);
    for (auto _ : state) {
        benchmark::DoNotOptimize(general_spectrum(model, grid));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(bm_general_spectrum)->Unit(benchmark::kMicrosecond);

// Raw stochastic-integrator throughput; items/s is steps/s. The acceptance
// budget (16 trajectories, ~600M steps under a minute) rests on this number.
template <SimConfig::Integrator kIntegrator>
void bm_integrator_steps(benchmark::State& state) {
    const OperatingPoint op = solve_steady_state(LaserParams{});
    const TransferModel model = TransferModel::for_operating_point(op);
    const double dt = 1.0e-3 / model.spectral_radius();
    const std::size_t n_steps = 1u << 16;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_path(model, {0.0, 0.0, 0.0}, dt,
                                                n_steps, kIntegrator, seed++));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n_steps));
}
BENCHMARK(bm_integrator_steps<SimConfig::Integrator::euler_maruyama>)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_integrator_steps<SimConfig::Integrator::exact>)
    ->Unit(benchmark::kMillisecond);

// One adaptive information integral, the unit cost of a 64-point sweep.
void bm_shannon_information(benchmark::State& state) {
    const EprSource src = EprSource::create(LaserParams{});
    DenseCodingParams dc;
    dc.reflectivity = 0.01;
    dc.photon_flux = 3.0 / (2.0 * std::numbers::pi);
    dc.signal_bandwidth = 2.0 / (2.0 * std::numbers::pi);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shannon_information(src, dc));
    }
}
BENCHMARK(bm_shannon_information)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
