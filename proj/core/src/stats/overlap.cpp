#include "koala/stats/overlap.hpp"

#include <algorithm>
#include <string>

#include "koala/error.hpp"

namespace koala::stats {

void ThresholdGrid::validate() const {
  if (thresholds.empty()) throw InvalidArgument("threshold grid is empty");
  if (thresholds.front() < 1) throw InvalidArgument("thresholds must be >= 1");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (thresholds[i] <= thresholds[i - 1]) {
      throw InvalidArgument("thresholds must be strictly ascending");
    }
  }
}

void LengthBins::validate() const {
  if (bins.empty()) throw InvalidArgument("no length bins");
  if (bins.front().lo != 0.0 || bins.back().hi != 1.0) {
    throw InvalidArgument("length bins must span [0, 1]");
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (!(bins[i].lo < bins[i].hi)) throw InvalidArgument("length bin with lo >= hi");
    if (i > 0 && bins[i].lo != bins[i - 1].hi) {
      throw InvalidArgument("length bins must be contiguous");
    }
  }
}

std::size_t LengthBins::bin_of(std::size_t length, std::size_t instance_length) const {
  const double len = static_cast<double>(length);
  const double n = static_cast<double>(instance_length);
  for (std::size_t b = 0; b + 1 < bins.size(); ++b) {
    if (len < bins[b].hi * n) return b;
  }
  return bins.size() - 1;
}

namespace {

std::vector<std::string> split_csv(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    std::string item(csv.substr(pos, comma - pos));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw InvalidArgument("empty item in list '" + std::string(csv) + "'");
    out.push_back(std::move(item));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

ThresholdGrid parse_threshold_grid(std::string_view csv) {
  ThresholdGrid grid;
  grid.thresholds.clear();
  for (const auto& item : split_csv(csv)) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.front() == '-') {
      throw InvalidArgument("bad threshold '" + item + "'");
    }
    grid.thresholds.push_back(v);
  }
  grid.validate();
  return grid;
}

LengthBins parse_length_bins(std::string_view edges_csv) {
  std::vector<double> edges;
  for (const auto& item : split_csv(edges_csv)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument("bad bin edge '" + item + "'");
    edges.push_back(v);
  }
  if (edges.size() < 2) throw InvalidArgument("need at least two bin edges");
  LengthBins bins;
  bins.bins.clear();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) bins.bins.push_back({edges[i], edges[i + 1]});
  bins.validate();
  return bins;
}

void OverlapParams::validate() const {
  grid.validate();
  bins.validate();
  if (max_k == 0) throw InvalidArgument("max_k must be >= 1");
}

std::vector<std::vector<std::string>> extract_kgrams(std::span<const std::string> instance,
                                                     std::size_t k) {
  std::vector<std::vector<std::string>> out;
  if (k == 0 || k > instance.size()) return out;
  out.reserve(instance.size() - k + 1);
  for (std::size_t i = 0; i + k <= instance.size(); ++i) {
    out.emplace_back(instance.begin() + i, instance.begin() + i + k);
  }
  return out;
}

std::optional<std::vector<double>> kgram_hit_ratio(std::span<const std::string> instance,
                                                   std::size_t k, const ThresholdGrid& grid,
                                                   const FrequencySource& source) {
  grid.validate();
  if (k == 0 || k > instance.size()) return std::nullopt;
  const std::size_t windows = instance.size() - k + 1;
  std::vector<std::uint64_t> hits(grid.size(), 0);
  for (std::size_t i = 0; i < windows; ++i) {
    const auto c = source.total_count(instance.subspan(i, k));
    for (std::size_t t = 0; t < grid.size(); ++t) hits[t] += c >= grid.thresholds[t];
  }
  std::vector<double> ratios(grid.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    ratios[t] = static_cast<double>(hits[t]) / static_cast<double>(windows);
  }
  return ratios;
}

CellMatrix kgram_hit_length_ratio(std::span<const std::string> instance,
                                  const LengthBins& bins, const ThresholdGrid& grid,
                                  const FrequencySource& source) {
  grid.validate();
  bins.validate();
  const std::size_t n = instance.size();
  if (n == 0) throw InvalidArgument("instance must contain at least one token");
  std::vector<std::uint64_t> totals(bins.size(), 0);
  std::vector<std::vector<std::uint64_t>> hits(bins.size(),
                                               std::vector<std::uint64_t>(grid.size(), 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      const auto b = bins.bin_of(j - i, n);
      ++totals[b];
      const auto c = source.total_count(instance.subspan(i, j - i));
      for (std::size_t t = 0; t < grid.size(); ++t) hits[b][t] += c >= grid.thresholds[t];
    }
  }
  CellMatrix cells(bins.size(), std::vector<Cell>(grid.size()));
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (totals[b] == 0) continue;
    for (std::size_t t = 0; t < grid.size(); ++t) {
      cells[b][t] = static_cast<double>(hits[b][t]) / static_cast<double>(totals[b]);
    }
  }
  return cells;
}

namespace {

CellMatrix ratios(const std::vector<std::vector<std::uint64_t>>& hits,
                  const std::vector<std::uint64_t>& totals) {
  CellMatrix cells(hits.size());
  for (std::size_t r = 0; r < hits.size(); ++r) {
    cells[r].resize(hits[r].size());
    if (totals[r] == 0) continue;
    for (std::size_t t = 0; t < hits[r].size(); ++t) {
      cells[r][t] = static_cast<double>(hits[r][t]) / static_cast<double>(totals[r]);
    }
  }
  return cells;
}

}  // namespace

InstanceOverlap compute_instance_overlap(std::string instance_id,
                                         std::span<const std::string> instance,
                                         const OverlapParams& params,
                                         const FrequencySource& source) {
  params.validate();
  const std::size_t n = instance.size();
  if (n == 0) throw InvalidArgument("instance must contain at least one token");
  const auto& thresholds = params.grid.thresholds;
  const std::size_t num_t = thresholds.size();

  InstanceOverlap out;
  out.instance_id = std::move(instance_id);
  out.length = n;
  out.kgram_totals.assign(params.max_k, 0);
  out.kgram_hits.assign(params.max_k, std::vector<std::uint64_t>(num_t, 0));
  out.bin_totals.assign(params.bins.size(), 0);
  out.bin_hits.assign(params.bins.size(), std::vector<std::uint64_t>(num_t, 0));

  for (std::size_t k = 1; k <= std::min(params.max_k, n); ++k) {
    out.kgram_totals[k - 1] = n - k + 1;
  }
  std::vector<std::size_t> bin_of_length(n + 1);
  for (std::size_t len = 1; len <= n; ++len) {
    bin_of_length[len] = params.bins.bin_of(len, n);
    out.bin_totals[bin_of_length[len]] += n - len + 1;
  }

  // Every substring is tokens[end - len, end) for exactly one (end, len).
  // Spans past the returned extension are below the smallest threshold and
  // contribute nothing to the hit tallies.
  for (std::size_t end = 1; end <= n; ++end) {
    const auto counts = source.left_extension_counts(instance, end, end, thresholds.front());
    for (std::size_t len = 1; len <= counts.size(); ++len) {
      const auto c = counts[len - 1];
      auto& bin_row = out.bin_hits[bin_of_length[len]];
      for (std::size_t t = 0; t < num_t && thresholds[t] <= c; ++t) {
        ++bin_row[t];
        if (len <= params.max_k) ++out.kgram_hits[len - 1][t];
      }
    }
  }

  out.hit_ratio = ratios(out.kgram_hits, out.kgram_totals);
  out.hit_length_ratio = ratios(out.bin_hits, out.bin_totals);
  return out;
}

namespace {

void mean_cells(std::span<const InstanceOverlap> instances, CellMatrix InstanceOverlap::*field,
                CellMatrix& means, std::vector<std::vector<std::size_t>>& support) {
  const auto& shape = instances.front().*field;
  means.assign(shape.size(), {});
  support.assign(shape.size(), {});
  for (std::size_t r = 0; r < shape.size(); ++r) {
    means[r].resize(shape[r].size());
    support[r].assign(shape[r].size(), 0);
    for (std::size_t c = 0; c < shape[r].size(); ++c) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& inst : instances) {
        if (const auto& cell = (inst.*field)[r][c]) {
          sum += *cell;
          ++count;
        }
      }
      support[r][c] = count;
      if (count) means[r][c] = sum / static_cast<double>(count);
    }
  }
}

}  // namespace

BenchmarkOverlap aggregate_benchmark(std::span<const InstanceOverlap> instances,
                                     const OverlapParams& params) {
  if (instances.empty()) throw InvalidArgument("aggregate_benchmark: no instances");
  for (const auto& inst : instances) {
    bool ok = inst.hit_ratio.size() == params.max_k &&
              inst.hit_length_ratio.size() == params.bins.size();
    for (const auto& row : inst.hit_ratio) ok = ok && row.size() == params.grid.size();
    for (const auto& row : inst.hit_length_ratio) ok = ok && row.size() == params.grid.size();
    if (!ok) throw InvalidArgument("instance " + inst.instance_id + " has a different shape");
  }
  BenchmarkOverlap out;
  out.instance_count = instances.size();
  out.thresholds = params.grid.thresholds;
  out.bins = params.bins.bins;
  out.max_k = params.max_k;
  mean_cells(instances, &InstanceOverlap::hit_ratio, out.hit_ratio, out.hit_ratio_support);
  mean_cells(instances, &InstanceOverlap::hit_length_ratio, out.hit_length_ratio,
             out.hit_length_ratio_support);
  return out;
}

std::vector<CountTableRow> count_table(std::span<const std::string> query,
                                       const IndexSet& indexes, std::size_t max_n) {
  if (query.empty()) throw InvalidArgument("count_table: empty query");
  if (indexes.empty()) throw InvalidArgument("count_table: no indexes");
  std::vector<CountTableRow> rows;
  const std::size_t top = std::min(max_n, query.size());
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t i = 0; i + n <= query.size(); ++i) {
      CountTableRow row;
      row.n = n;
      row.position = i;
      row.ngram.assign(query.begin() + i, query.begin() + i + n);
      row.per_corpus = indexes.per_corpus_count(row.ngram);
      for (auto c : row.per_corpus) row.total += c;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<OverlapSpan> highlight_overlaps(std::span<const std::string> generated,
                                            const FrequencySource& source,
                                            std::size_t min_len, std::uint64_t threshold) {
  if (min_len < 1) throw InvalidArgument("min_len must be >= 1");
  if (threshold < 1) throw InvalidArgument("threshold must be >= 1");
  const std::size_t n = generated.size();
  // reach[e] is the length of the longest span ending at e whose count stays
  // >= threshold; reach_count[e] its count. (e - reach[e], e) is therefore
  // left-maximal, and right-maximal iff reach[e + 1] is not reach[e] + 1.
  std::vector<std::size_t> reach(n + 2, 0);
  std::vector<std::uint64_t> reach_count(n + 2, 0);
  for (std::size_t end = 1; end <= n; ++end) {
    const auto counts = source.left_extension_counts(generated, end, end, threshold);
    reach[end] = counts.size();
    if (!counts.empty()) reach_count[end] = counts.back();
  }
  std::vector<OverlapSpan> spans;
  for (std::size_t end = 1; end <= n; ++end) {
    const std::size_t len = reach[end];
    if (len < min_len) continue;
    if (end < n && reach[end + 1] > len) continue;
    spans.push_back({end - len, end, reach_count[end]});
  }
  return spans;
}

}  // namespace koala::stats
