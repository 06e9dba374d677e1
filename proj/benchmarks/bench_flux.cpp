#include <benchmark/benchmark.h>

#include "pprobe/flux.hpp"
#include "pprobe/pressure.hpp"

namespace {

const double kTwoPi = 6.28318530717958647692;

void BM_ConvectiveFlux(benchmark::State& state) {
    auto f = pprobe::to_analytic(pprobe::random_mode_field(1, 3, 1.0, kTwoPi));
    pprobe::Surface cyl = pprobe::make_cylinder(0.0, 2.0, 1.5, +1);
    int order = static_cast<int>(state.range(0));
    pprobe::QuadratureRule q = pprobe::surface_quadrature(cyl, order);
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::convective_flux(f, cyl, q));
}
BENCHMARK(BM_ConvectiveFlux)->Arg(8)->Arg(16);

void BM_BlockCharge(benchmark::State& state) {
    auto f = pprobe::to_analytic(pprobe::random_mode_field(1, 3, 1.0, kTwoPi));
    pprobe::Block b = pprobe::dyadic_block(pprobe::BlockKind::cylinder, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(pprobe::block_charge(f, b, f.eval(b.centroid), 8));
}
BENCHMARK(BM_BlockCharge);

void BM_Oscillation(benchmark::State& state) {
    auto f = pprobe::to_analytic(pprobe::random_mode_field(1, 3, 1.0, kTwoPi));
    pprobe::Block b = pprobe::dyadic_block(pprobe::BlockKind::cylinder, 0);
    auto sampler = pprobe::sample_block(b, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::oscillation(f, sampler));
}
BENCHMARK(BM_Oscillation)->Arg(1024)->Arg(4096);

void BM_BlockContribution(benchmark::State& state) {
    auto f = pprobe::to_analytic(pprobe::random_mode_field(1, 3, 1.0, kTwoPi));
    pprobe::Block b = pprobe::dyadic_block(pprobe::BlockKind::cylinder, 0);
    for (auto _ : state) benchmark::DoNotOptimize(pprobe::block_contribution(f, b, 6));
}
BENCHMARK(BM_BlockContribution);

}  // namespace
