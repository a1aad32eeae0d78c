// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "websample/generators.hpp"
#include "websample/pagerank.hpp"
#include "websample/walkers.hpp"

namespace {

using namespace websample;

const WebGraph& bench_graph() {
    static const WebGraph g = [] {
        GeneratorSpec spec;
        spec.n = 20000;
        spec.seed = 11;
        return generate_power_law_web(spec);
    }();
    return g;
}

WalkConfig walk_config(WalkAlgorithm algorithm) {
    WalkConfig c;
    c.algorithm = algorithm;
    c.walkers = 16;
    c.step_budget = 5000;
    c.seed = 3;
    return c;
}

template <bool Parallel>
void BM_Walk(benchmark::State& state) {
    const Environment env(bench_graph(), 5);
    const auto config = walk_config(state.range(0) == 0 ? WalkAlgorithm::AB : WalkAlgorithm::C);
    for (auto _ : state) {
        FrozenAdjacency frozen(bench_graph().node_count());
        auto merged = Parallel ? run_walks(env, config, frozen) : run_walks_serial(env, config, frozen);
        benchmark::DoNotOptimize(merged.visit_count.data());
    }
    state.SetItemsProcessed(state.iterations() * config.walkers * config.step_budget);
}

template <bool Parallel>
void BM_PageRank(benchmark::State& state) {
    const Digraph g = Digraph::from_webgraph(bench_graph());
    for (auto _ : state) {
        auto r = Parallel ? pagerank(g, 1.0 / 7.0) : pagerank_serial(g, 1.0 / 7.0);
        benchmark::DoNotOptimize(r.scores.data());
    }
}

} // namespace

BENCHMARK(BM_Walk<true>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Walk<false>)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PageRank<true>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PageRank<false>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
