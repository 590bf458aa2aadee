#include <benchmark/benchmark.h>

#include "paperrec/similarity.hpp"
#include "support/synthetic.hpp"

using namespace paperrec;
namespace pt = paperrec::testing;

static void BM_Jaccard(benchmark::State& state) {
    std::mt19937_64 rng(1);
    auto a = pt::rand_string_set(rng, 100, static_cast<std::size_t>(state.range(0)));
    auto b = pt::rand_string_set(rng, 100, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(jaccard(a, b));
}
BENCHMARK(BM_Jaccard)->Arg(10)->Arg(50)->Arg(200);

static void BM_BuildMatrix(benchmark::State& state) {
    pt::SyntheticParams p;
    p.n_users = static_cast<std::size_t>(state.range(0));
    auto corpus = pt::make_synthetic_corpus(p);
    SimilarityWeights w;
    std::size_t threads = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_matrix(corpus, w, threads));
    state.counters["pairs"] = static_cast<double>(p.n_users * (p.n_users - 1) / 2);
}
BENCHMARK(BM_BuildMatrix)
    ->Args({200, 1})
    ->Args({200, 4})
    ->Args({1000, 1})
    ->Args({1000, 4})
    ->Unit(benchmark::kMillisecond);

static void BM_TopN(benchmark::State& state) {
    pt::SyntheticParams p;
    p.n_users = 1000;
    auto corpus = pt::make_synthetic_corpus(p);
    auto matrix = build_matrix(corpus, SimilarityWeights());
    const auto& target = matrix.users().front();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            matrix.top_n_neighbors(target, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_TopN)->Arg(10)->Arg(100);

BENCHMARK_MAIN();
