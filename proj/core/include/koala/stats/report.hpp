#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "koala/stats/overlap.hpp"

namespace koala::stats {

// One line of an n-gram file with its counts.
struct NgramRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> per_corpus;
  std::uint64_t total = 0;
};

struct OverlapReport {
  std::vector<std::string> corpora;
  std::vector<NgramRow> rows;
  // Lines treated as benchmark instances; absent when the file has none.
  std::optional<BenchmarkOverlap> aggregate;
};

// Reads a UTF-8 n-gram file (one n-gram per line; lines that tokenize to
// nothing are skipped), counts every line, and aggregates the per-line
// overlap statistics. Throws InvalidArgument when there is something to
// count but no index.
OverlapReport build_overlap_report(std::string_view file_text, const IndexSet& indexes,
                                   const OverlapParams& params);

nlohmann::json to_json(const BenchmarkOverlap& overlap);
nlohmann::json to_json(const OverlapReport& report);
// Table-style TSV: n, ngram, then one column per corpus, then total.
std::string to_tsv(const OverlapReport& report);

nlohmann::json count_table_json(std::span<const CountTableRow> rows,
                                std::span<const std::string> corpora);
std::string count_table_tsv(std::span<const CountTableRow> rows,
                            std::span<const std::string> corpora);

// Novelty check result: the spans plus per-corpus counts of each span.
nlohmann::json novelty_json(std::span<const std::string> tokens,
                            std::span<const OverlapSpan> spans, const IndexSet& indexes,
                            std::size_t min_len, std::uint64_t threshold);

}  // namespace koala::stats
