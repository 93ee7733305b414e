#include "koala/stats/frequency_source.hpp"

#include <algorithm>

#include "koala/error.hpp"

namespace koala::stats {

std::vector<std::uint64_t> FrequencySource::left_extension_counts(
    std::span<const std::string> tokens, std::size_t end, std::size_t max_len,
    std::uint64_t min_count) const {
  std::vector<std::uint64_t> counts;
  const std::size_t limit = std::min(max_len, end);
  for (std::size_t len = 1; len <= limit; ++len) {
    const auto c = total_count(tokens.subspan(end - len, len));
    if (c < min_count) break;
    counts.push_back(c);
  }
  return counts;
}

IndexSet::IndexSet(std::vector<std::shared_ptr<const csa::FmIndex>> indexes) {
  for (auto& idx : indexes) add(std::move(idx));
}

void IndexSet::add(std::shared_ptr<const csa::FmIndex> index) {
  if (!index) throw InvalidArgument("null index");
  if (find(index->metadata().corpus_id)) {
    throw InvalidArgument("corpus_id already present: " + index->metadata().corpus_id);
  }
  indexes_.push_back(std::move(index));
}

std::vector<std::string> IndexSet::corpus_ids() const {
  std::vector<std::string> ids;
  ids.reserve(indexes_.size());
  for (const auto& idx : indexes_) ids.push_back(idx->metadata().corpus_id);
  return ids;
}

std::shared_ptr<const csa::FmIndex> IndexSet::find(const std::string& corpus_id) const {
  for (const auto& idx : indexes_) {
    if (idx->metadata().corpus_id == corpus_id) return idx;
  }
  return nullptr;
}

std::vector<std::uint64_t> IndexSet::per_corpus_count(
    std::span<const std::string> pattern) const {
  std::vector<std::uint64_t> counts;
  counts.reserve(indexes_.size());
  for (const auto& idx : indexes_) counts.push_back(idx->count(pattern));
  return counts;
}

std::uint64_t IndexSet::total_count(std::span<const std::string> pattern) const {
  if (indexes_.empty()) throw InvalidArgument("total_count: no indexes");
  std::uint64_t total = 0;
  for (const auto& idx : indexes_) total += idx->count(pattern);
  return total;
}

std::vector<std::uint64_t> IndexSet::left_extension_counts(
    std::span<const std::string> tokens, std::size_t end, std::size_t max_len,
    std::uint64_t min_count) const {
  if (indexes_.empty()) throw InvalidArgument("left_extension_counts: no indexes");
  const std::size_t limit = std::min(max_len, end);
  // All corpora advance in lockstep so the walk stops as soon as the summed
  // count drops below min_count.
  std::vector<csa::CountRange> ranges;
  ranges.reserve(indexes_.size());
  for (const auto& idx : indexes_) ranges.push_back(idx->full_range());

  std::vector<std::uint64_t> sums;
  for (std::size_t len = 1; len <= limit; ++len) {
    const auto& token = tokens[end - len];
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < indexes_.size(); ++i) {
      if (ranges[i].empty()) continue;
      const auto symbol = indexes_[i]->vocabulary().find(token);
      ranges[i] = symbol ? indexes_[i]->extend_left(ranges[i], *symbol)
                         : csa::CountRange{};
      sum += ranges[i].count();
    }
    if (sum < min_count) break;
    sums.push_back(sum);
  }
  return sums;
}

std::uint64_t total_count(std::span<const std::string> pattern, const IndexSet& indexes) {
  return indexes.total_count(pattern);
}

}  // namespace koala::stats
