#include "manuscriptor/engine.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace manuscriptor;

namespace {

constexpr std::size_t kDim = 400;

// 100k documents; every 10th has the title "selected", so the filter keeps 10%.
const Engine& engine_100k() {
    static const Engine engine = [] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<float> u(-1.0f, 1.0f);
        std::vector<Paper> papers(100000);
        std::vector<Embedding> docs(papers.size());
        for (std::size_t i = 0; i < papers.size(); ++i) {
            papers[i].id = "p" + std::to_string(i);
            papers[i].title = i % 10 == 0 ? "selected" : "ordinary";
            docs[i].vec.resize(kDim);
            for (auto& x : docs[i].vec) x = u(rng);
            docs[i].valid = true;
        }
        VectorStore store(kDim);
        std::vector<float> v(kDim);
        for (const char* w : {"selected", "ordinary", "query"}) {
            for (auto& x : v) x = u(rng);
            store.set(w, v);
        }
        auto snapshot = std::make_shared<const Snapshot>(Snapshot::build(std::move(papers), std::move(store)));
        return Engine(snapshot, std::move(docs));
    }();
    return engine;
}

void BM_Search10PercentFilter(benchmark::State& state) {
    const auto& engine = engine_100k();
    const auto source = RankingSource::text("query");
    for (auto _ : state) benchmark::DoNotOptimize(engine.search("selected", source));
}
BENCHMARK(BM_Search10PercentFilter)->Unit(benchmark::kMillisecond);

void BM_SearchUnfiltered(benchmark::State& state) {
    const auto& engine = engine_100k();
    const auto source = RankingSource::text("query");
    for (auto _ : state) benchmark::DoNotOptimize(engine.search("", source));
}
BENCHMARK(BM_SearchUnfiltered)->Unit(benchmark::kMillisecond);

}  // namespace
