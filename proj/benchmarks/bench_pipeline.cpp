#include <benchmark/benchmark.h>

#include "ltp/embedding.hpp"
#include "ltp/forest.hpp"
#include "ltp/generators.hpp"
#include "ltp/rng.hpp"

using namespace ltp;

namespace {

Dataset synthetic_dataset(std::size_t graphs, NodeId nodes) {
    Dataset d;
    d.name = "bench";
    d.num_classes = 2;
    Rng rng(7);
    for (std::size_t i = 0; i < graphs; ++i) {
        const double p = 0.1 + 0.3 * rng.next_double();
        d.graphs.push_back(make_erdos_renyi(nodes, p, i));
        d.labels.push_back(static_cast<int>(i % 2));
    }
    return d;
}

EmbeddingConfig ltp_defaults() {
    EmbeddingConfig ec;
    ec.features = FeatureSelection::ltp();
    return ec;
}

}  // namespace

static void BM_EmbedDataset(benchmark::State& state) {
    const auto d = synthetic_dataset(64, static_cast<NodeId>(state.range(0)));
    const auto ec = ltp_defaults();
    for (auto _ : state) {
        auto m = embed_dataset(d, ec, 0);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_EmbedDataset)->Arg(32)->Arg(64)->Arg(128);

static void BM_EmbedDatasetWorkers(benchmark::State& state) {
    const auto d = synthetic_dataset(128, 64);
    const auto ec = ltp_defaults();
    const unsigned workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto m = embed_dataset(d, ec, workers);
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_EmbedDatasetWorkers)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

static void BM_ForestFit(benchmark::State& state) {
    const auto d = synthetic_dataset(200, 48);
    const auto m = embed_dataset(d, ltp_defaults(), 0);
    ForestConfig fc;
    fc.n_trees = static_cast<int>(state.range(0));
    fc.seed = 0;
    for (auto _ : state) {
        auto forest = fit({m.data.data(), m.rows, m.cols}, d.labels, fc, 0);
        benchmark::DoNotOptimize(forest);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForestFit)->Arg(50)->Arg(200)->Arg(500);

static void BM_ForestPredict(benchmark::State& state) {
    const auto d = synthetic_dataset(200, 48);
    const auto m = embed_dataset(d, ltp_defaults(), 0);
    ForestConfig fc;
    fc.n_trees = 500;
    const auto forest = fit({m.data.data(), m.rows, m.cols}, d.labels, fc, 0);
    for (auto _ : state) {
        auto labels = predict(forest, {m.data.data(), m.rows, m.cols}, 0);
        benchmark::DoNotOptimize(labels);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.rows));
}
BENCHMARK(BM_ForestPredict);

BENCHMARK_MAIN();
