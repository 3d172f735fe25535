#include "manuscriptor/stemmer.hpp"
#include "manuscriptor/textproc.hpp"

#include <benchmark/benchmark.h>

using namespace manuscriptor;

namespace {

const std::string kParagraph =
    "Loss of volvolyor28 was associated with increased testosterone and reduced puberty in the treated mice. "
    "We analysed the differences between groups using generalized estimating equations (p < 0.05). "
    "These findings identify candidate biomarkers for early diagnosis of endocrine disorders.";

void BM_TokenizeIndex(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(kParagraph, Pipeline::Index));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(kParagraph.size()));
}
BENCHMARK(BM_TokenizeIndex);

void BM_TokenizeEmbed(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(tokenize(kParagraph, Pipeline::Embed));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(kParagraph.size()));
}
BENCHMARK(BM_TokenizeEmbed);

void BM_Stem(benchmark::State& state) {
    const std::vector<std::string> words = {"generalizations", "treated", "differences", "associated", "running"};
    for (auto _ : state) {
        for (const auto& w : words) benchmark::DoNotOptimize(stem_english(w));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(words.size()));
}
BENCHMARK(BM_Stem);

}  // namespace
