#include <benchmark/benchmark.h>

#include "abelfuchs/volume.hpp"

using namespace abelfuchs;

namespace {

const Weights generic({0.3, 0.25, 0.2, 0.15});

const CurveData& curve()
{
    static const CurveData c = curve_from_tau(tau_from_m(-1.0));
    return c;
}

const MSGrid& cached_grid()
{
    static const MSGrid g = ms_grid(generic, curve(), 24, 2.0 * grid_cell(curve().lattice, 24));
    return g;
}

void BM_grid(benchmark::State& state, bool parallel)
{
    const int N = int(state.range(0));
    const double r = 2.0 * grid_cell(curve().lattice, N);
    for (auto _ : state) {
        MSGrid g = parallel ? ms_grid(generic, curve(), N, r) : ms_grid_serial(generic, curve(), N, r);
        benchmark::DoNotOptimize(g.samples.data());
    }
}

void BM_density(benchmark::State& state, bool parallel)
{
    const MSGrid& g = cached_grid();
    for (auto _ : state) {
        DensityField d = parallel ? kahler_density(g) : kahler_density_serial(g);
        benchmark::DoNotOptimize(d.density.data());
    }
}

void BM_quadrature(benchmark::State& state, bool parallel)
{
    const MSGrid& g = cached_grid();
    const DensityField d = kahler_density(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(mean_density(g, d.density, nullptr, parallel));
}

} // namespace

BENCHMARK_CAPTURE(BM_grid, serial, false)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_grid, openmp, true)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_density, serial, false)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_density, openmp, true)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_quadrature, serial, false)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_quadrature, openmp, true)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
