#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>

#include "corpus.hpp"
#include "koala/csa/fm_index.hpp"
#include "koala/csa/index_io.hpp"
#include "koala/csa/suffix_array.hpp"

using namespace koala;

namespace {

const csa::EncodedCorpus& corpus_of(std::size_t tokens) {
  static std::map<std::size_t, csa::EncodedCorpus> cache;
  auto it = cache.find(tokens);
  if (it == cache.end()) {
    it = cache.emplace(tokens, csa::encode_corpus(bench::zipf_docs(tokens, 50'000))).first;
  }
  return it->second;
}

const csa::FmIndex& index_of(std::size_t tokens) {
  static std::map<std::size_t, csa::FmIndex> cache;
  auto it = cache.find(tokens);
  if (it == cache.end()) {
    it = cache.emplace(tokens, csa::FmIndex::build(corpus_of(tokens), {"bench", 0})).first;
  }
  return it->second;
}

void BM_SuffixArray(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csa::build_suffix_array(corpus.symbols));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.symbols.size()));
}
BENCHMARK(BM_SuffixArray)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

void BM_BuildIndex(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(csa::FmIndex::build(corpus, {"bench", 0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.symbols.size()));
}
BENCHMARK(BM_BuildIndex)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 22)->Unit(benchmark::kMillisecond);

// Patterns are windows of the corpus so every search runs to completion.
void BM_Count(benchmark::State& state) {
  const std::size_t tokens = 1 << 22;
  const auto& index = index_of(tokens);
  const auto& corpus = corpus_of(tokens);
  const auto m = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<std::vector<csa::Symbol>> patterns;
  while (patterns.size() < 1024) {
    const auto at = rng() % (corpus.symbols.size() - m);
    std::vector<csa::Symbol> p(corpus.symbols.begin() + at, corpus.symbols.begin() + at + m);
    if (std::all_of(p.begin(), p.end(), [](csa::Symbol s) { return s >= csa::kFirstTokenSymbol; })) {
      patterns.push_back(std::move(p));
    }
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(index.count_symbols(patterns[i++ & 1023]));
}
BENCHMARK(BM_Count)->Arg(1)->Arg(5)->Arg(10)->Arg(20);

void BM_Deserialize(benchmark::State& state) {
  const auto bytes = csa::serialize(index_of(1 << 20));
  for (auto _ : state) benchmark::DoNotOptimize(csa::deserialize(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_Deserialize)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
