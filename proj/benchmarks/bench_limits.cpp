#include <benchmark/benchmark.h>

#include "mapstat/limit_laws.hpp"
#include "mapstat/special_functions.hpp"

namespace {

void BM_SolveDde(benchmark::State& state) {
    mapstat::limitlaw::DdeOptions o;
    o.step = 1.0 / static_cast<double>(state.range(0));
    o.check_convergence = false;
    for (auto _ : state) {
        const auto t = mapstat::limitlaw::solve_dde(o);
        benchmark::DoNotOptimize(t.grid_values().data());
    }
}
BENCHMARK(BM_SolveDde)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ConstantI(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(mapstat::limitlaw::constant_I());
}
BENCHMARK(BM_ConstantI);

void BM_ExpIntegralE1(benchmark::State& state) {
    double s = 0.0;
    for (auto _ : state) {
        s += 1e-4;
        benchmark::DoNotOptimize(mapstat::limitlaw::exp_integral_e1(0.1 + s));
    }
}
BENCHMARK(BM_ExpIntegralE1);

void BM_NuLimitCdf(benchmark::State& state) {
    mapstat::limitlaw::DdeOptions o;
    o.step = 1e-3;
    o.check_convergence = false;
    const auto table = mapstat::limitlaw::solve_dde(o);
    double y = 0.0;
    for (auto _ : state) {
        y = (y < 9.0) ? y + 0.1 : 0.1;
        benchmark::DoNotOptimize(mapstat::limitlaw::nu_limit_cdf(table, y));
    }
}
BENCHMARK(BM_NuLimitCdf)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
