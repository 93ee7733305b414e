#include <gtest/gtest.h>

#include <random>

#include "koala/error.hpp"
#include "koala/stats/overlap.hpp"
#include "test_corpora.hpp"

using namespace koala;
using namespace koala::stats;
using koala::fixtures::Docs;
using koala::fixtures::toks;

namespace {

IndexSet single(const Docs& docs, const std::string& id = "c") {
  IndexSet set;
  set.add(fixtures::build_index(docs, id));
  return set;
}

ThresholdGrid grid(std::vector<std::uint64_t> t) { return ThresholdGrid{std::move(t)}; }

// Every qualifying span that neither neighbour extension keeps qualifying.
std::vector<OverlapSpan> brute_highlight(const std::vector<std::string>& x,
                                         const FrequencySource& src, std::size_t min_len,
                                         std::uint64_t t) {
  const std::size_t n = x.size();
  auto count = [&](std::size_t i, std::size_t j) {
    return src.total_count(std::span<const std::string>(x).subspan(i, j - i));
  };
  std::vector<OverlapSpan> out;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i + min_len <= j; ++i) {
      const auto c = count(i, j);
      if (c < t) continue;
      if (i > 0 && count(i - 1, j) >= t) continue;
      if (j < n && count(i, j + 1) >= t) continue;
      out.push_back({i, j, c});
    }
  }
  return out;
}

}  // namespace

TEST(ExtractKgrams, Positional) {
  const auto x = toks({"a", "b", "c"});
  EXPECT_EQ(extract_kgrams(x, 2).size(), 2u);
  EXPECT_EQ(extract_kgrams(x, 2)[1], toks({"b", "c"}));
  EXPECT_EQ(extract_kgrams(toks({"a", "a", "a"}), 1).size(), 3u);
  EXPECT_EQ(extract_kgrams(x, 3), std::vector<std::vector<std::string>>{x});
  EXPECT_TRUE(extract_kgrams(x, 4).empty());
}

TEST(TotalCount, SumsOverCorpora) {
  IndexSet set;
  set.add(fixtures::build_index(fixtures::make_docs({toks({"q", "q", "q"})}), "one"));
  set.add(fixtures::build_index(fixtures::make_docs({toks({"q", "x", "q"}), toks({"q", "q"})}), "two"));
  EXPECT_EQ(total_count(toks({"q"}), set), 7u);
  EXPECT_EQ(set.per_corpus_count(toks({"q"})), (std::vector<std::uint64_t>{3, 4}));
  EXPECT_EQ(total_count(toks({"nope"}), set), 0u);
  EXPECT_THROW(total_count(toks({"q"}), IndexSet{}), InvalidArgument);
  EXPECT_THROW(set.add(fixtures::build_index({}, "one")), InvalidArgument);
}

TEST(HitRatio, VerbatimInstance) {
  const auto x = toks({"to", "be", "or", "not"});
  const auto set = single(fixtures::make_docs({x}));
  for (std::size_t k = 1; k <= x.size(); ++k) {
    EXPECT_EQ(kgram_hit_ratio(x, k, grid({1}), set).value(), std::vector<double>{1.0});
  }
  EXPECT_FALSE(kgram_hit_ratio(x, 5, grid({1}), set));
}

TEST(HitRatio, NoBigramOccurs) {
  const auto set = single(fixtures::make_docs({toks({"a", "x", "b", "x", "c"})}));
  EXPECT_EQ(kgram_hit_ratio(toks({"a", "b", "c"}), 2, grid({1}), set).value(),
            std::vector<double>{0.0});
}

TEST(HitRatio, ThresholdCut) {
  const auto set = single(fixtures::make_docs({toks({"a", "b", "a", "b"})}));
  EXPECT_EQ(kgram_hit_ratio(toks({"a", "b"}), 1, grid({2, 3}), set).value(),
            (std::vector<double>{1.0, 0.0}));
}

TEST(LengthBins, EdgesGoToHigherBin) {
  const LengthBins bins;
  EXPECT_EQ(bins.bin_of(1, 4), 1u);  // 0.25
  EXPECT_EQ(bins.bin_of(2, 4), 2u);
  EXPECT_EQ(bins.bin_of(3, 4), 3u);
  EXPECT_EQ(bins.bin_of(4, 4), 3u);  // closed last bin
  EXPECT_EQ(bins.bin_of(1, 5), 0u);
  LengthBins bad;
  bad.bins = {{0.0, 0.5}, {0.6, 1.0}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(HitLengthRatio, TopBinOfFourTokens) {
  const auto x = toks({"a", "b", "c", "d"});
  const auto inst = compute_instance_overlap("i", x, {}, single(fixtures::make_docs({x})));
  EXPECT_EQ(inst.bin_totals[3], 3u);
  // Fractions .25 .5 .75 1 fill bins 1..3; bin 0 stays empty.
  EXPECT_EQ(inst.bin_totals[0], 0u);
  EXPECT_FALSE(inst.hit_length_ratio[0][0]);
  for (std::size_t b = 1; b < 4; ++b) EXPECT_EQ(inst.hit_length_ratio[b][0], 1.0);
}

TEST(HitLengthRatio, EmptyBinIsNotApplicable) {
  const auto x = toks({"a", "b"});
  const auto cells = kgram_hit_length_ratio(x, {}, grid({1}), single(fixtures::make_docs({x})));
  // Length 1 is exactly half of 2 tokens and lands in [0.5, 0.75).
  EXPECT_FALSE(cells[0][0]);
  EXPECT_FALSE(cells[1][0]);
  EXPECT_EQ(cells[2][0], 1.0);
  EXPECT_EQ(cells[3][0], 1.0);
}

TEST(HitLengthRatio, LongSpansAbsent) {
  const auto set = single(fixtures::make_docs({toks({"a", "b"}), toks({"c", "d"})}));
  const auto cells = kgram_hit_length_ratio(toks({"a", "b", "c", "d"}), {}, grid({1, 2}), set);
  EXPECT_EQ(cells[3][0], 0.0);
  EXPECT_EQ(cells[3][1], 0.0);
}

TEST(Aggregate, MeansSkipNotApplicable) {
  const auto set = single(fixtures::make_docs({toks({"a", "b", "c", "d", "e"})}));
  OverlapParams params;
  params.grid = grid({1});
  const auto long_inst = compute_instance_overlap("l", toks({"a", "b", "c", "d", "e"}), params, set);
  const auto short_inst = compute_instance_overlap("s", toks({"z", "y"}), params, set);
  const std::vector<InstanceOverlap> all{long_inst, short_inst};
  const auto agg = aggregate_benchmark(all, params);
  EXPECT_EQ(agg.hit_ratio[0][0], 0.5);    // k=1: 1.0 and 0.0
  EXPECT_EQ(agg.hit_ratio[4][0], 1.0);    // k=5: only the long instance applies
  EXPECT_EQ(agg.hit_ratio_support[4][0], 1u);
  EXPECT_FALSE(agg.hit_ratio[5][0]);      // k=6: neither applies
  const std::vector<InstanceOverlap> one{long_inst};
  EXPECT_EQ(aggregate_benchmark(one, params).hit_ratio, long_inst.hit_ratio);
  EXPECT_THROW(aggregate_benchmark(std::vector<InstanceOverlap>{}, params), InvalidArgument);
}

TEST(Aggregate, ShapeMismatchRejected) {
  const auto set = single(fixtures::make_docs({toks({"a"})}));
  OverlapParams p1, p2;
  p2.max_k = 3;
  const std::vector<InstanceOverlap> mixed{compute_instance_overlap("a", toks({"a"}), p1, set),
                                           compute_instance_overlap("b", toks({"a"}), p2, set)};
  EXPECT_THROW(aggregate_benchmark(mixed, p1), InvalidArgument);
}

TEST(CountTable, RowStructure) {
  const auto q = toks({"plastic", "bags", "floating", "in", "the", "ocean"});
  const auto set = single(fixtures::make_docs({toks({"in", "the", "ocean", "in", "the"})}));
  const auto rows = count_table(q, set, 6);
  ASSERT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows.front().n, 1u);
  EXPECT_EQ(rows.back().n, 6u);
  for (const auto& r : rows) {
    if (r.ngram == toks({"in", "the"})) {
      EXPECT_EQ(r.total, 2u);
    }
  }
  EXPECT_EQ(count_table(toks({"x"}), set, 6).size(), 1u);
  EXPECT_EQ(count_table(q, set, 2).size(), 11u);
}

TEST(Highlight, Example) {
  const auto set = single(fixtures::make_docs({toks({"a", "b"})}));
  const auto spans = highlight_overlaps(toks({"a", "b", "z", "a", "b"}), set, 2, 1);
  EXPECT_EQ(spans, (std::vector<OverlapSpan>{{0, 2, 1}, {3, 5, 1}}));
}

TEST(Highlight, WholeTextAndNothing) {
  const auto text = toks({"one", "two", "three"});
  const auto set = single(fixtures::make_docs({text}));
  EXPECT_EQ(highlight_overlaps(text, set, 1, 1), (std::vector<OverlapSpan>{{0, 3, 1}}));
  EXPECT_TRUE(highlight_overlaps(toks({"one", "three"}), set, 2, 1).empty());
  EXPECT_THROW(highlight_overlaps(text, set, 0, 1), InvalidArgument);
}

// Spans overlap when two corpus passages share a middle token.
TEST(Highlight, OverlappingMaximalSpans) {
  const auto set = single(fixtures::make_docs({toks({"a", "b", "c"}), toks({"c", "d", "e"})}));
  const auto spans = highlight_overlaps(toks({"a", "b", "c", "d", "e"}), set, 2, 1);
  EXPECT_EQ(spans, (std::vector<OverlapSpan>{{0, 3, 1}, {2, 5, 1}}));
}

TEST(StatsProperties, FastRouteMatchesBruteForce) {
  std::mt19937_64 rng(99);
  OverlapParams params;
  params.grid = grid({1, 2, 3, 5, 10, 50});
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<Docs> corpora;
    IndexSet set;
    for (int c = 0; c < 2; ++c) {
      corpora.push_back(fixtures::random_docs(rng, 400, 3 + iter % 4, 30));
      set.add(fixtures::build_index(corpora.back(), "c" + std::to_string(c)));
    }
    const fixtures::NaiveSource naive(corpora);
    std::vector<std::string> x;
    const std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) x.push_back(fixtures::word(rng() % 6));

    const auto fast = compute_instance_overlap("x", x, params, set);
    for (std::size_t k = 1; k <= params.max_k; ++k) {
      const auto direct = kgram_hit_ratio(x, k, params.grid, naive);
      ASSERT_EQ(direct.has_value(), fast.hit_ratio[k - 1][0].has_value());
      if (!direct) continue;
      for (std::size_t t = 0; t < params.grid.size(); ++t) {
        ASSERT_DOUBLE_EQ((*direct)[t], *fast.hit_ratio[k - 1][t]);
        if (t > 0) ASSERT_LE((*direct)[t], (*direct)[t - 1]);  // monotone in t
      }
    }
    const auto direct_len = kgram_hit_length_ratio(x, params.bins, params.grid, naive);
    ASSERT_EQ(direct_len, fast.hit_length_ratio);
    for (const auto& row : fast.hit_length_ratio) {
      for (const auto& cell : row) {
        if (cell) {
          ASSERT_GE(*cell, 0.0);
          ASSERT_LE(*cell, 1.0);
        }
      }
    }
    for (std::uint64_t t : {1, 2, 4}) {
      for (std::size_t min_len : {1, 2, 3}) {
        ASSERT_EQ(highlight_overlaps(x, set, min_len, t), brute_highlight(x, naive, min_len, t));
      }
    }
  }
}

TEST(ParamParsing, GridAndBins) {
  EXPECT_EQ(parse_threshold_grid("1, 10,100").thresholds, (std::vector<std::uint64_t>{1, 10, 100}));
  EXPECT_THROW(parse_threshold_grid("10,1"), InvalidArgument);
  EXPECT_THROW(parse_threshold_grid("0,1"), InvalidArgument);
  EXPECT_THROW(parse_threshold_grid("1,,2"), InvalidArgument);
  EXPECT_THROW(parse_threshold_grid("x"), InvalidArgument);
  const auto bins = parse_length_bins("0,0.5,1");
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins.bins[1].lo, 0.5);
  EXPECT_THROW(parse_length_bins("0,0.5"), InvalidArgument);
  EXPECT_THROW(parse_length_bins("1"), InvalidArgument);
}
