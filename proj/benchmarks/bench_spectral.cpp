#include <benchmark/benchmark.h>

#include "pprobe/grid.hpp"
#include "pprobe/pressure.hpp"
#include "pprobe/semigroup.hpp"

namespace {

const double kTwoPi = 6.28318530717958647692;

void BM_LerayProject(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    pprobe::GridField g = pprobe::random_solenoidal(1, 4, 1.0, n, kTwoPi);
    pprobe::SpectralGrid ws(g);
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::leray_project(g, ws));
}
BENCHMARK(BM_LerayProject)->Arg(32)->Arg(64);

void BM_SpectralPressure(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    pprobe::GridField g = pprobe::random_solenoidal(1, 4, 1.0, n, kTwoPi);
    pprobe::SpectralGrid ws(g);
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::grad_pressure_spectral(g, ws));
}
BENCHMARK(BM_SpectralPressure)->Arg(32)->Arg(64);

void BM_HeatApply(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    pprobe::GridField g = pprobe::random_solenoidal(1, 4, 1.0, n, kTwoPi);
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::heat_apply(g, 0.1));
}
BENCHMARK(BM_HeatApply)->Arg(32);

}  // namespace
