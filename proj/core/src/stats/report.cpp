#include "koala/stats/report.hpp"

#include <sstream>

#include "koala/error.hpp"
#include "koala/textprep/tokenize.hpp"

namespace koala::stats {
namespace {

nlohmann::json cells_json(const CellMatrix& m) {
  auto out = nlohmann::json::array();
  for (const auto& row : m) {
    auto r = nlohmann::json::array();
    for (const auto& cell : row) r.push_back(cell ? nlohmann::json(*cell) : nlohmann::json());
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json per_corpus_json(std::span<const std::string> corpora,
                               std::span<const std::uint64_t> counts) {
  auto obj = nlohmann::json::object();
  for (std::size_t i = 0; i < corpora.size(); ++i) obj[corpora[i]] = counts[i];
  return obj;
}

void tsv_header(std::ostringstream& out, std::span<const std::string> corpora) {
  out << "n\tngram";
  for (const auto& c : corpora) out << '\t' << c;
  out << "\ttotal\n";
}

void tsv_row(std::ostringstream& out, std::size_t n, const std::vector<std::string>& tokens,
             std::span<const std::uint64_t> counts, std::uint64_t total) {
  out << n << '\t' << textprep::join_tokens(tokens);
  for (auto c : counts) out << '\t' << c;
  out << '\t' << total << '\n';
}

}  // namespace

OverlapReport build_overlap_report(std::string_view file_text, const IndexSet& indexes,
                                   const OverlapParams& params) {
  params.validate();
  OverlapReport report;
  report.corpora = indexes.corpus_ids();
  std::vector<InstanceOverlap> instances;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < file_text.size()) {
    auto nl = file_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = file_text.size();
    const auto line = file_text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    auto seq = textprep::prepare(line);
    if (seq.tokens.empty()) continue;
    if (indexes.empty()) throw InvalidArgument("no index loaded to count against");

    NgramRow row;
    row.line = line_no;
    row.tokens = std::move(seq.tokens);
    row.per_corpus = indexes.per_corpus_count(row.tokens);
    for (auto c : row.per_corpus) row.total += c;
    instances.push_back(compute_instance_overlap("line-" + std::to_string(line_no), row.tokens,
                                                 params, indexes));
    report.rows.push_back(std::move(row));
  }
  if (!instances.empty()) report.aggregate = aggregate_benchmark(instances, params);
  return report;
}

nlohmann::json to_json(const BenchmarkOverlap& overlap) {
  nlohmann::json j;
  j["instance_count"] = overlap.instance_count;
  j["thresholds"] = overlap.thresholds;
  auto k_values = nlohmann::json::array();
  for (std::size_t k = 1; k <= overlap.max_k; ++k) k_values.push_back(k);
  j["k_values"] = std::move(k_values);
  auto bins = nlohmann::json::array();
  for (const auto& b : overlap.bins) bins.push_back({b.lo, b.hi});
  j["length_bins"] = std::move(bins);
  j["hit_ratio"] = cells_json(overlap.hit_ratio);
  j["hit_length_ratio"] = cells_json(overlap.hit_length_ratio);
  j["hit_ratio_support"] = overlap.hit_ratio_support;
  j["hit_length_ratio_support"] = overlap.hit_length_ratio_support;
  return j;
}

nlohmann::json to_json(const OverlapReport& report) {
  nlohmann::json j;
  j["corpora"] = report.corpora;
  auto rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"line", r.line},
                    {"n", r.tokens.size()},
                    {"ngram", textprep::join_tokens(r.tokens)},
                    {"tokens", r.tokens},
                    {"per_corpus", per_corpus_json(report.corpora, r.per_corpus)},
                    {"total", r.total}});
  }
  j["rows"] = std::move(rows);
  j["aggregate"] = report.aggregate ? to_json(*report.aggregate) : nlohmann::json();
  return j;
}

std::string to_tsv(const OverlapReport& report) {
  std::ostringstream out;
  tsv_header(out, report.corpora);
  for (const auto& r : report.rows) {
    tsv_row(out, r.tokens.size(), r.tokens, r.per_corpus, r.total);
  }
  return out.str();
}

nlohmann::json count_table_json(std::span<const CountTableRow> rows,
                                std::span<const std::string> corpora) {
  nlohmann::json j;
  j["corpora"] = std::vector<std::string>(corpora.begin(), corpora.end());
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"position", r.position},
                   {"ngram", textprep::join_tokens(r.ngram)},
                   {"per_corpus", per_corpus_json(corpora, r.per_corpus)},
                   {"total", r.total}});
  }
  j["rows"] = std::move(arr);
  return j;
}

std::string count_table_tsv(std::span<const CountTableRow> rows,
                            std::span<const std::string> corpora) {
  std::ostringstream out;
  tsv_header(out, corpora);
  for (const auto& r : rows) tsv_row(out, r.n, r.ngram, r.per_corpus, r.total);
  return out.str();
}

nlohmann::json novelty_json(std::span<const std::string> tokens,
                            std::span<const OverlapSpan> spans, const IndexSet& indexes,
                            std::size_t min_len, std::uint64_t threshold) {
  const auto corpora = indexes.corpus_ids();
  nlohmann::json j;
  j["tokens"] = std::vector<std::string>(tokens.begin(), tokens.end());
  j["min_len"] = min_len;
  j["threshold"] = threshold;
  j["corpora"] = corpora;
  auto arr = nlohmann::json::array();
  std::vector<bool> covered(tokens.size(), false);
  for (const auto& s : spans) {
    const auto piece = tokens.subspan(s.begin, s.length());
    const auto counts = indexes.per_corpus_count(piece);
    arr.push_back({{"begin", s.begin},
                   {"end", s.end},
                   {"text", textprep::join_tokens({piece.begin(), piece.end()})},
                   {"total", s.total_count},
                   {"per_corpus", per_corpus_json(corpora, counts)}});
    for (std::size_t i = s.begin; i < s.end; ++i) covered[i] = true;
  }
  j["spans"] = std::move(arr);
  std::size_t covered_tokens = 0;
  for (bool c : covered) covered_tokens += c;
  j["covered_tokens"] = covered_tokens;
  j["overlap_fraction"] =
      tokens.empty() ? 0.0 : static_cast<double>(covered_tokens) / static_cast<double>(tokens.size());
  return j;
}

}  // namespace koala::stats
