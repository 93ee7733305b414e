#include <benchmark/benchmark.h>

#include <memory>

#include "corpus.hpp"
#include "koala/csa/fm_index.hpp"
#include "koala/stats/overlap.hpp"

using namespace koala;

namespace {

struct Fixture {
  std::vector<textprep::TokenSequence> docs = bench::zipf_docs(1 << 21, 20'000);
  stats::IndexSet set;
  Fixture() {
    set.add(std::make_shared<const csa::FmIndex>(
        csa::FmIndex::build(csa::encode_corpus(docs), {"bench", 0})));
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

std::vector<std::string> instance(std::size_t len) {
  const auto& d = fixture().docs[3].tokens;
  return {d.begin(), d.begin() + static_cast<std::ptrdiff_t>(len)};
}

void BM_InstanceOverlap(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  const stats::OverlapParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::compute_instance_overlap("i", inst, params, fixture().set));
  }
}
BENCHMARK(BM_InstanceOverlap)->Arg(16)->Arg(64)->Arg(256);

void BM_CountTable(benchmark::State& state) {
  const auto inst = instance(6);
  for (auto _ : state) benchmark::DoNotOptimize(stats::count_table(inst, fixture().set, 6));
}
BENCHMARK(BM_CountTable);

void BM_HighlightOverlaps(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::highlight_overlaps(inst, fixture().set, 5, 1));
  }
}
BENCHMARK(BM_HighlightOverlaps)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
