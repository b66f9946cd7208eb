#include <benchmark/benchmark.h>

#include "mapstat/mapping.hpp"
#include "mapstat/montecarlo.hpp"
#include "mapstat/rng.hpp"

namespace {

void BM_RandomMapping(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    mapstat::SplitMix64 gen(1);
    mapstat::Mapping m;
    for (auto _ : state) {
        mapstat::mc::random_mapping(n, gen, m);
        benchmark::DoNotOptimize(m.next.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RandomMapping)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_Decompose(benchmark::State& state) {
    const auto n = static_cast<std::int64_t>(state.range(0));
    mapstat::SplitMix64 gen(2);
    mapstat::Mapping m;
    mapstat::mc::random_mapping(n, gen, m);
    mapstat::Decomposition d;
    mapstat::DecomposeBuffers buf;
    for (auto _ : state) {
        mapstat::decompose(m, d, buf);
        benchmark::DoNotOptimize(d.components.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Decompose)->Arg(1000)->Arg(100000)->Arg(1000000);

void BM_ReplicatePipeline(benchmark::State& state) {
    // one full replicate: draw, decompose, reduce
    const auto n = static_cast<std::int64_t>(state.range(0));
    mapstat::Mapping m;
    mapstat::Decomposition d;
    mapstat::DecomposeBuffers buf;
    std::uint64_t rep = 0;
    for (auto _ : state) {
        mapstat::SplitMix64 gen(mapstat::replicate_seed(7, rep++));
        mapstat::mc::random_mapping(n, gen, m);
        mapstat::decompose(m, d, buf);
        benchmark::DoNotOptimize(mapstat::stats(d));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReplicatePipeline)->Arg(100000);

}  // namespace
