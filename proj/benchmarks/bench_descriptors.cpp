#include <benchmark/benchmark.h>

#include "ltp/descriptors.hpp"
#include "ltp/generators.hpp"

using namespace ltp;

namespace {

Graph graph_for(std::int64_t n) {
    // keep the expected degree near 16 as n grows
    const double p = std::min(1.0, 16.0 / static_cast<double>(n));
    return make_erdos_renyi(static_cast<NodeId>(n), p, 42);
}

}  // namespace

static void BM_EdgeBetweenness(benchmark::State& state) {
    const Graph g = graph_for(state.range(0));
    for (auto _ : state) {
        auto values = edge_betweenness(g);
        benchmark::DoNotOptimize(values);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_EdgeBetweenness)->RangeMultiplier(2)->Range(64, 1024);

static void BM_EdgeBetweennessParallel(benchmark::State& state) {
    const Graph g = graph_for(1024);
    const unsigned workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto values = edge_betweenness(g, workers);
        benchmark::DoNotOptimize(values);
    }
}
BENCHMARK(BM_EdgeBetweennessParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

static void BM_JaccardIndex(benchmark::State& state) {
    const Graph g = graph_for(state.range(0));
    for (auto _ : state) {
        auto values = jaccard_index(g);
        benchmark::DoNotOptimize(values);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_JaccardIndex)->RangeMultiplier(4)->Range(64, 4096);

static void BM_LocalDegreeScore(benchmark::State& state) {
    const Graph g = graph_for(state.range(0));
    for (auto _ : state) {
        auto values = local_degree_score(g);
        benchmark::DoNotOptimize(values);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(g.edge_count()));
}
BENCHMARK(BM_LocalDegreeScore)->RangeMultiplier(4)->Range(64, 4096);

static void BM_ShortestPathMultiset(benchmark::State& state) {
    const Graph g = graph_for(state.range(0));
    for (auto _ : state) {
        auto values = shortest_path_multiset(g);
        benchmark::DoNotOptimize(values);
    }
}
BENCHMARK(BM_ShortestPathMultiset)->RangeMultiplier(2)->Range(64, 1024);
