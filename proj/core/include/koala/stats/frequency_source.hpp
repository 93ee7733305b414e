#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "koala/csa/fm_index.hpp"

namespace koala::stats {

// Where n-gram frequencies come from. The statistics only ever ask for
// counts of contiguous token spans, so any exact counter can stand in for
// the index collection (the tests plug in a brute-force one).
class FrequencySource {
 public:
  virtual ~FrequencySource() = default;

  // Occurrences of `pattern`, summed over every corpus. Pattern non-empty.
  virtual std::uint64_t total_count(std::span<const std::string> pattern) const = 0;

  // Counts of tokens[end - l, end) for l = 1, 2, ... up to max_len, stopping
  // before the first count below `min_count` (min_count >= 1). Counts of
  // longer spans can only be smaller, so everything past the returned
  // prefix is below min_count.
  virtual std::vector<std::uint64_t> left_extension_counts(
      std::span<const std::string> tokens, std::size_t end, std::size_t max_len,
      std::uint64_t min_count = 1) const;
};

// The collection of per-corpus indexes queried together.
class IndexSet : public FrequencySource {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::shared_ptr<const csa::FmIndex>> indexes);

  // Throws InvalidArgument on a repeated corpus_id.
  void add(std::shared_ptr<const csa::FmIndex> index);

  std::size_t size() const { return indexes_.size(); }
  bool empty() const { return indexes_.empty(); }
  const csa::FmIndex& at(std::size_t i) const { return *indexes_[i]; }
  std::vector<std::string> corpus_ids() const;
  // nullptr when absent.
  std::shared_ptr<const csa::FmIndex> find(const std::string& corpus_id) const;

  // One count per corpus, in insertion order.
  std::vector<std::uint64_t> per_corpus_count(std::span<const std::string> pattern) const;

  // Throws InvalidArgument when the set is empty.
  std::uint64_t total_count(std::span<const std::string> pattern) const override;

  std::vector<std::uint64_t> left_extension_counts(
      std::span<const std::string> tokens, std::size_t end, std::size_t max_len,
      std::uint64_t min_count = 1) const override;

 private:
  std::vector<std::shared_ptr<const csa::FmIndex>> indexes_;
};

// Σ over corpora of count(index, pattern).
std::uint64_t total_count(std::span<const std::string> pattern, const IndexSet& indexes);

}  // namespace koala::stats
