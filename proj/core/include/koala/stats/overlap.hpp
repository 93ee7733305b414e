#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "koala/stats/frequency_source.hpp"

namespace koala::stats {

// Frequency thresholds a count must reach (count >= t) to be a hit.
struct ThresholdGrid {
  std::vector<std::uint64_t> thresholds{1, 10, 100, 1'000, 10'000, 100'000, 1'000'000};

  // Strictly ascending, non-empty, every value >= 1.
  void validate() const;
  std::size_t size() const { return thresholds.size(); }
};

// Half-open [lo, hi) fraction of the instance length; the last bin is closed.
struct LengthBin {
  double lo;
  double hi;
};

struct LengthBins {
  std::vector<LengthBin> bins{{0.0, 0.25}, {0.25, 0.5}, {0.5, 0.75}, {0.75, 1.0}};

  // Contiguous, covering [0, 1], non-overlapping.
  void validate() const;
  std::size_t size() const { return bins.size(); }
  // Bin of a substring of `length` tokens inside an instance of
  // `instance_length` tokens. A fraction on an edge falls in the higher bin.
  std::size_t bin_of(std::size_t length, std::size_t instance_length) const;
};

// A ratio cell; nullopt marks "not applicable" (k longer than the instance,
// or an empty length bin).
using Cell = std::optional<double>;
using CellMatrix = std::vector<std::vector<Cell>>;

// "1,10,100" style lists. Throw InvalidArgument on bad syntax or values
// failing validate(). Bin edges "0,0.5,1" give [0, 0.5) and [0.5, 1].
ThresholdGrid parse_threshold_grid(std::string_view csv);
LengthBins parse_length_bins(std::string_view edges_csv);

struct OverlapParams {
  ThresholdGrid grid;
  LengthBins bins;
  std::size_t max_k = 6;  // hit ratios for k = 1..max_k

  void validate() const;
};

struct InstanceOverlap {
  std::string instance_id;
  std::size_t length = 0;
  // hit_ratio[k - 1][t] = kgram_hits[k - 1][t] / kgram_totals[k - 1]
  CellMatrix hit_ratio;
  std::vector<std::uint64_t> kgram_totals;
  std::vector<std::vector<std::uint64_t>> kgram_hits;
  // hit_length_ratio[bin][t] = bin_hits[bin][t] / bin_totals[bin]
  CellMatrix hit_length_ratio;
  std::vector<std::uint64_t> bin_totals;
  std::vector<std::vector<std::uint64_t>> bin_hits;
};

struct BenchmarkOverlap {
  std::size_t instance_count = 0;
  std::vector<std::uint64_t> thresholds;
  std::vector<LengthBin> bins;
  std::size_t max_k = 0;
  // Means over applicable instances; nullopt when no instance applies.
  CellMatrix hit_ratio;
  CellMatrix hit_length_ratio;
  // Number of instances behind each mean.
  std::vector<std::vector<std::size_t>> hit_ratio_support;
  std::vector<std::vector<std::size_t>> hit_length_ratio_support;
};

// All |x| - k + 1 windows, in order. Empty when k is 0 or exceeds |x|.
std::vector<std::vector<std::string>> extract_kgrams(std::span<const std::string> instance,
                                                     std::size_t k);

// Per threshold: windows with total_count >= t over the window count.
// nullopt when k > |instance| (or k == 0).
std::optional<std::vector<double>> kgram_hit_ratio(std::span<const std::string> instance,
                                                   std::size_t k, const ThresholdGrid& grid,
                                                   const FrequencySource& source);

// [bin][threshold] cells over all positional substrings of the instance.
CellMatrix kgram_hit_length_ratio(std::span<const std::string> instance,
                                  const LengthBins& bins, const ThresholdGrid& grid,
                                  const FrequencySource& source);

// Both statistics in one pass over left extensions of every end position.
InstanceOverlap compute_instance_overlap(std::string instance_id,
                                         std::span<const std::string> instance,
                                         const OverlapParams& params,
                                         const FrequencySource& source);

// Cell-wise means skipping not-applicable cells. Throws InvalidArgument on
// an empty list or on instances computed with different shapes.
BenchmarkOverlap aggregate_benchmark(std::span<const InstanceOverlap> instances,
                                     const OverlapParams& params);

struct CountTableRow {
  std::size_t n = 0;
  std::size_t position = 0;  // start token of the n-gram within the query
  std::vector<std::string> ngram;
  std::vector<std::uint64_t> per_corpus;  // IndexSet order
  std::uint64_t total = 0;
};

// Every positional n-gram of the query for n = 1..min(max_n, |query|),
// grouped by n.
std::vector<CountTableRow> count_table(std::span<const std::string> query,
                                       const IndexSet& indexes, std::size_t max_n);

struct OverlapSpan {
  std::size_t begin = 0;  // token offsets, half-open
  std::size_t end = 0;
  std::uint64_t total_count = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const OverlapSpan&) const = default;
};

// Maximal spans with length >= min_len and total_count >= threshold, in
// order of their end. Spans may overlap.
std::vector<OverlapSpan> highlight_overlaps(std::span<const std::string> generated,
                                            const FrequencySource& source,
                                            std::size_t min_len, std::uint64_t threshold);

}  // namespace koala::stats
