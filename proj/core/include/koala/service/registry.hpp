#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "koala/stats/frequency_source.hpp"

namespace koala::service {

struct CorpusInfo {
  std::string corpus_id;
  std::uint64_t token_count = 0;
  std::uint64_t doc_count = 0;
  std::uint64_t index_size_bytes = 0;  // in-memory query structures
  std::int64_t build_timestamp = 0;
  std::uint32_t format_version = 0;
};

// Outcome of loading one index file.
struct LoadOutcome {
  std::filesystem::path path;
  std::string corpus_id;  // empty when the file could not be read
  bool loaded = false;
  std::string error;
};

// The set of queryable indexes. Readers take an immutable snapshot; reloads
// build a complete new set and swap it in, so a reader sees the old set or
// the new one and never a partial state.
class IndexRegistry {
 public:
  using Snapshot = std::shared_ptr<const stats::IndexSet>;

  IndexRegistry();

  Snapshot snapshot() const;

  // Loads every path (each is checksum-verified by the reader) and swaps in
  // the ones that loaded. Files that fail, or whose corpus_id repeats an
  // earlier one, are reported and left out.
  std::vector<LoadOutcome> load(const std::vector<std::filesystem::path>& paths);

  // Swaps in an already built set.
  void replace(stats::IndexSet set);

  std::vector<CorpusInfo> list() const;
  std::vector<LoadOutcome> last_load() const;

 private:
  mutable std::mutex mu_;
  Snapshot current_;
  std::vector<LoadOutcome> last_load_;
};

CorpusInfo describe(const csa::FmIndex& index);

}  // namespace koala::service
