#include "manuscriptor/invindex.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace manuscriptor;

namespace {

// Zipf-ish corpus over `w0 .. w{vocab-1}`.
std::vector<Paper> corpus(std::size_t docs, std::size_t vocab) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Paper> papers(docs);
    for (std::size_t i = 0; i < docs; ++i) {
        papers[i].id = "d" + std::to_string(i);
        for (int w = 0; w < 60; ++w) {
            const double x = u(rng);
            papers[i].abstract += "w" + std::to_string(static_cast<std::size_t>(x * x * x * vocab)) + " ";
        }
    }
    return papers;
}

const InvertedIndex& index_100k() {
    static const InvertedIndex idx = InvertedIndex::build(corpus(100000, 5000));
    return idx;
}

void BM_FilterSingleTerm(benchmark::State& state) {
    const auto& idx = index_100k();
    for (auto _ : state) benchmark::DoNotOptimize(filter_docs(idx, "w3"));
}
BENCHMARK(BM_FilterSingleTerm)->Unit(benchmark::kMicrosecond);

void BM_FilterMixed(benchmark::State& state) {
    const auto& idx = index_100k();
    for (auto _ : state) benchmark::DoNotOptimize(filter_docs(idx, "w1 w20|w30|w40 !w2"));
}
BENCHMARK(BM_FilterMixed)->Unit(benchmark::kMicrosecond);

void BM_IndexBuild(benchmark::State& state) {
    const auto papers = corpus(static_cast<std::size_t>(state.range(0)), 5000);
    for (auto _ : state) benchmark::DoNotOptimize(InvertedIndex::build(papers));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
