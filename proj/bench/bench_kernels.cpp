// Serial reference vs OpenMP kernels for the hot paths: sample generation,
// the empirical posterior grid and the asymptotic posterior grid.

#include <benchmark/benchmark.h>

#include <numbers>

#include "phaseml/inference.hpp"
#include "phaseml/sampling.hpp"

namespace {

using namespace phaseml;

constexpr double kHalfPi = std::numbers::pi / 2.0;

void BM_DrawSamples(benchmark::State& state, Exec exec) {
    const StateModel model(1.0, 0.0, 0.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        SampleSet s = draw_samples(model, kHalfPi, n, 42, exec);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}

void BM_EmpiricalPosterior(benchmark::State& state, Exec exec) {
    const StateModel model(1.0, 0.0, 0.0);
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t grid = static_cast<std::size_t>(state.range(1));
    const SampleSet samples = draw_samples(model, 1.0, n, 7);
    for (auto _ : state) {
        PhaseDistribution d =
            empirical_posterior(model, samples.values, PhaseInterval::full, grid, exec);
        benchmark::DoNotOptimize(d.density.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n * grid));
}

void BM_AsymptoticPosterior(benchmark::State& state, Exec exec) {
    const StateModel model(1.0, 0.0, 0.0);
    const std::size_t grid = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        PhaseDistribution d =
            asymptotic_posterior(model, 1.0, 100, PhaseInterval::full, grid, exec);
        benchmark::DoNotOptimize(d.density.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_DrawSamples, serial, Exec::serial)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_DrawSamples, parallel, Exec::parallel)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_EmpiricalPosterior, serial, Exec::serial)
    ->Args({10000, 2048})->Args({100000, 4096});
BENCHMARK_CAPTURE(BM_EmpiricalPosterior, parallel, Exec::parallel)
    ->Args({10000, 2048})->Args({100000, 4096});
BENCHMARK_CAPTURE(BM_AsymptoticPosterior, serial, Exec::serial)->Arg(4096);
BENCHMARK_CAPTURE(BM_AsymptoticPosterior, parallel, Exec::parallel)->Arg(4096);

BENCHMARK_MAIN();
