// koala: corpus deduplication, n-gram indexing and overlap statistics.

#include <sys/resource.h>

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "koala/csa/encoded_corpus.hpp"
#include "koala/csa/index_io.hpp"
#include "koala/dedup/deduplicate.hpp"
#include "koala/error.hpp"
#include "koala/service/config.hpp"
#include "koala/service/registry.hpp"
#include "koala/service/server.hpp"
#include "koala/stats/report.hpp"
#include "koala/textprep/corpus_reader.hpp"
#include "koala/textprep/normalize.hpp"
#include "koala/textprep/tokenize.hpp"
#include "pipeline_config.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace koala;

// Raised for bad invocations that CLI11 cannot see (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::string config_path;
  std::string format = "json";
  unsigned threads = 0;  // 0 = leave the default
  std::string out;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(g.out, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + g.out);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

textprep::InputFormat input_format(const std::string& name) {
  return name == "text" ? textprep::InputFormat::kPlainText : textprep::InputFormat::kJsonLines;
}

long peak_rss_kb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss;
}

stats::IndexSet load_indexes(const std::vector<fs::path>& paths) {
  stats::IndexSet set;
  for (const auto& p : paths) {
    set.add(std::make_shared<const csa::FmIndex>(csa::load_index(p)));
  }
  return set;
}

// ---------------------------------------------------------------- dedup

struct DedupArgs {
  std::string input;
  std::string input_format = "jsonl";
  std::string ledger;
  std::optional<double> threshold;
  std::optional<std::size_t> permutations, bands, batch_size;
  std::optional<std::uint64_t> seed;
};

int run_dedup(const Globals& g, cli::PipelineConfig cfg, const DedupArgs& a) {
  auto& params = cfg.dedup;
  if (a.threshold) params.lsh.jaccard_threshold = *a.threshold;
  if (a.permutations) params.permutations = *a.permutations;
  if (a.bands) params.lsh.bands = *a.bands;
  if (a.seed) params.seed = *a.seed;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (g.threads) params.threads = g.threads;
  if (a.permutations && !a.bands && params.permutations % params.lsh.bands != 0) {
    throw UsageError("--permutations must be a multiple of the band count");
  }
  if (params.permutations % params.lsh.bands == 0) {
    params.lsh.rows_per_band = params.permutations / params.lsh.bands;
  }
  params.validate();

  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw UsageError("cannot read " + a.input);
  auto raw = textprep::read_documents(in, input_format(a.input_format), "input");
  std::vector<textprep::TokenSequence> docs;
  docs.reserve(raw.size());
  for (const auto& d : raw) docs.push_back(textprep::prepare(d.text, d.doc_id));

  const std::size_t batch = cfg.batch_size ? cfg.batch_size : std::max<std::size_t>(docs.size(), 1);
  std::optional<dedup::DedupBatch> merged;
  std::size_t batches = 0;
  for (std::size_t begin = 0; begin < docs.size() || batches == 0; begin += batch) {
    const std::size_t end = std::min(docs.size(), begin + batch);
    auto part = dedup::deduplicate_batch(
        std::span<const textprep::TokenSequence>(docs).subspan(begin, end - begin), params);
    merged = merged ? dedup::merge_deduplicated(std::move(*merged), std::move(part))
                    : std::move(part);
    ++batches;
    if (end >= docs.size()) break;
  }
  const auto& result = merged->result;

  if (!a.ledger.empty()) {
    std::ofstream ledger(a.ledger, std::ios::trunc);
    if (!ledger) throw UsageError("cannot write " + a.ledger);
    for (const auto& r : result.removed) {
      ledger << json{{"removed_id", r.removed_id}, {"kept_id", r.kept_id},
                     {"exact_jaccard", r.exact_jaccard}}
                    .dump()
             << '\n';
    }
  }
  const std::unordered_set<std::string> keep(result.retained.begin(), result.retained.end());
  std::ostringstream out;
  for (const auto& d : raw) {
    if (keep.count(d.doc_id)) out << json{{"doc_id", d.doc_id}, {"text", d.text}}.dump() << '\n';
  }
  emit(g, out.str());
  std::cerr << json{{"input", result.input_count()},
                    {"retained", result.retained.size()},
                    {"removed", result.removed.size()},
                    {"batches", batches}}
                   .dump()
            << '\n';
  return 0;
}

// ---------------------------------------------------------- build-index

struct BuildArgs {
  std::string corpus;
  std::string out;
  std::string corpus_id;
  std::string input_format = "jsonl";
  std::optional<std::int64_t> timestamp;
};

int run_build(const Globals& g, const BuildArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream in(a.corpus, std::ios::binary);
  if (!in) throw UsageError("cannot read " + a.corpus);
  csa::CorpusEncoder encoder;
  std::size_t read = 0;
  try {
    textprep::read_documents(in, input_format(a.input_format), a.corpus_id,
                             [&](textprep::RawDocument&& d) {
                               auto seq = textprep::prepare(d.text);
                               encoder.add_document(std::move(d.doc_id), seq.tokens);
                               ++read;
                             });
  } catch (const textprep::ParseError& e) {
    throw UsageError(a.corpus + ": " + e.what());
  }
  auto corpus = encoder.finish();
  const auto vocab = corpus.vocabulary.size();
  const auto length = corpus.symbols.size();
  csa::BuildOptions opts;
  opts.corpus_id = a.corpus_id;
  opts.build_timestamp = a.timestamp;
  const auto index = csa::FmIndex::build(corpus, opts);
  corpus = {};
  csa::save_index(index, a.out);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(g, json{{"corpus_id", a.corpus_id},
               {"documents_read", read},
               {"doc_count", index.metadata().doc_count},
               {"token_count", index.metadata().token_count},
               {"vocabulary_size", vocab},
               {"text_length", length},
               {"index_size_bytes", index.size_in_bytes()},
               {"file_bytes", fs::file_size(a.out)},
               {"build_seconds", secs},
               {"peak_rss_kb", peak_rss_kb()},
               {"out", a.out}}
              .dump());
  return 0;
}

// ---------------------------------------------------------------- count

struct CountArgs {
  std::vector<std::string> indexes;
  std::string query;
  bool table = false;
  std::optional<std::size_t> max_n;
};

int run_count(const Globals& g, const cli::PipelineConfig& cfg, const CountArgs& a) {
  std::vector<fs::path> paths(a.indexes.begin(), a.indexes.end());
  if (paths.empty()) paths = cfg.index_paths;
  if (paths.empty()) throw UsageError("count needs at least one --index");
  const auto set = load_indexes(paths);
  const auto tokens = textprep::prepare(a.query).tokens;
  if (tokens.empty()) throw UsageError("query is empty after tokenization");
  const auto corpora = set.corpus_ids();

  std::vector<stats::CountTableRow> rows;
  if (a.table) {
    rows = stats::count_table(tokens, set, a.max_n.value_or(cfg.stats.max_k));
  } else {
    stats::CountTableRow row;
    row.n = tokens.size();
    row.ngram = tokens;
    row.per_corpus = set.per_corpus_count(tokens);
    for (auto c : row.per_corpus) row.total += c;
    rows.push_back(std::move(row));
  }
  if (g.format == "tsv") {
    emit(g, stats::count_table_tsv(rows, corpora));
  } else if (a.table) {
    emit(g, stats::count_table_json(rows, corpora).dump());
  } else {
    json per = json::object();
    for (std::size_t i = 0; i < corpora.size(); ++i) per[corpora[i]] = rows[0].per_corpus[i];
    emit(g, json{{"query_tokens", tokens}, {"per_corpus", per}, {"total", rows[0].total}}.dump());
  }
  return 0;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string ngrams;
  std::vector<std::string> indexes;
  std::string thresholds, bins;
  std::optional<std::size_t> max_k;
};

int run_stats(const Globals& g, cli::PipelineConfig cfg, const StatsArgs& a) {
  auto& p = cfg.stats;
  if (!a.thresholds.empty()) p.grid = stats::parse_threshold_grid(a.thresholds);
  if (!a.bins.empty()) p.bins = stats::parse_length_bins(a.bins);
  if (a.max_k) p.max_k = *a.max_k;
  p.validate();
  const auto text = read_file(a.ngrams);
  if (!textprep::is_valid_utf8(text)) throw UsageError(a.ngrams + " is not valid UTF-8");
  std::vector<fs::path> paths(a.indexes.begin(), a.indexes.end());
  if (paths.empty()) paths = cfg.index_paths;
  const auto set = load_indexes(paths);
  if (g.format == "tsv") {
    emit(g, stats::to_tsv(stats::build_overlap_report(text, set, p)));
  } else {
    emit(g, service::overlap_document(text, set, p).dump());
  }
  return 0;
}

// -------------------------------------------------------------- novelty

struct NoveltyArgs {
  std::vector<std::string> indexes;
  std::string text, text_file;
  std::size_t min_len = 5;
  std::uint64_t threshold = 1;
};

int run_novelty(const Globals& g, const cli::PipelineConfig& cfg, const NoveltyArgs& a) {
  std::vector<fs::path> paths(a.indexes.begin(), a.indexes.end());
  if (paths.empty()) paths = cfg.index_paths;
  if (paths.empty()) throw UsageError("novelty needs at least one --index");
  const auto set = load_indexes(paths);
  const std::string text = a.text_file.empty() ? a.text : read_file(a.text_file);
  const auto tokens = textprep::prepare(text).tokens;
  const auto spans = stats::highlight_overlaps(tokens, set, a.min_len, a.threshold);
  if (g.format == "tsv") {
    std::ostringstream out;
    out << "begin\tend\ttotal\ttext\n";
    for (const auto& s : spans) {
      const std::vector<std::string> piece(tokens.begin() + s.begin, tokens.begin() + s.end);
      out << s.begin << '\t' << s.end << '\t' << s.total_count << '\t'
          << textprep::join_tokens(piece) << '\n';
    }
    emit(g, out.str());
  } else {
    emit(g, stats::novelty_json(tokens, spans, set, a.min_len, a.threshold).dump());
  }
  return 0;
}

// ---------------------------------------------------------------- serve

struct ServeArgs {
  std::vector<std::string> indexes;
  std::optional<std::string> host, data_dir;
  std::optional<int> port;
  std::optional<unsigned> job_workers;
};

int run_serve(const Globals& g, const ServeArgs& a) {
  service::ServiceConfig cfg;
  if (!g.config_path.empty()) cfg = service::load_config(g.config_path);
  service::apply_env_overrides(cfg);
  if (!a.indexes.empty()) cfg.index_paths.assign(a.indexes.begin(), a.indexes.end());
  if (a.host) cfg.host = *a.host;
  if (a.port) cfg.port = *a.port;
  if (a.data_dir) cfg.data_dir = *a.data_dir;
  if (a.job_workers) cfg.job_workers = *a.job_workers;
  if (g.threads) cfg.http_threads = g.threads;
  cfg.validate();

  // Signals are taken by a dedicated thread so that shutdown runs outside
  // signal context.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto registry = std::make_shared<service::IndexRegistry>();
  const auto log = service::stderr_log_sink();
  for (const auto& o : registry->load(cfg.index_paths)) {
    log(json{{"event", "index_load"}, {"path", o.path.string()}, {"corpus_id", o.corpus_id},
             {"loaded", o.loaded}, {"error", o.error}}
            .dump());
  }
  service::Server server(cfg, registry, log);
  const int port = server.start();
  log(json{{"event", "listening"}, {"host", cfg.host}, {"port", port}}.dump());
  int sig = 0;
  sigwait(&sigs, &sig);
  log(json{{"event", "shutdown"}, {"signal", sig}}.dump());
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"koala: corpus deduplication, n-gram indexing and overlap statistics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--threads", g.threads, "Cap on worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Write results here instead of stdout");
  app.fallthrough();

  DedupArgs dedup_args;
  auto* dedup_cmd = app.add_subcommand("dedup", "Remove near-duplicate documents");
  dedup_cmd->add_option("--input", dedup_args.input, "Corpus (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  dedup_cmd->add_option("--input-format", dedup_args.input_format)
      ->check(CLI::IsMember({"jsonl", "text"}));
  dedup_cmd->add_option("--threshold", dedup_args.threshold, "Exact Jaccard cut")
      ->check(CLI::Range(0.0, 1.0));
  dedup_cmd->add_option("--permutations", dedup_args.permutations)->check(CLI::PositiveNumber);
  dedup_cmd->add_option("--bands", dedup_args.bands, "LSH bands")->check(CLI::PositiveNumber);
  dedup_cmd->add_option("--seed", dedup_args.seed);
  dedup_cmd->add_option("--batch-size", dedup_args.batch_size, "Documents per batch")
      ->check(CLI::PositiveNumber);
  dedup_cmd->add_option("--ledger", dedup_args.ledger, "Removal ledger (JSON lines)");

  BuildArgs build_args;
  auto* build_cmd = app.add_subcommand("build-index", "Build an on-disk index of one corpus");
  build_cmd->add_option("--corpus", build_args.corpus)->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", build_args.out, "Index file to write")->required();
  build_cmd->add_option("--corpus-id", build_args.corpus_id)->required();
  build_cmd->add_option("--input-format", build_args.input_format)
      ->check(CLI::IsMember({"jsonl", "text"}));
  build_cmd->add_option("--timestamp", build_args.timestamp,
                        "Build time to record (Unix seconds)");

  CountArgs count_args;
  auto* count_cmd = app.add_subcommand("count", "Count a phrase in one or more indexes");
  count_cmd->add_option("--index", count_args.indexes)->check(CLI::ExistingFile);
  count_cmd->add_option("--q", count_args.query, "Phrase")->required();
  count_cmd->add_flag("--table", count_args.table, "Count every sub-n-gram of the phrase");
  count_cmd->add_option("--max-n", count_args.max_n)->check(CLI::PositiveNumber);

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Overlap report for an n-gram file");
  stats_cmd->add_option("--ngrams", stats_args.ngrams, "One n-gram per line")
      ->required()
      ->check(CLI::ExistingFile);
  stats_cmd->add_option("--index", stats_args.indexes)->check(CLI::ExistingFile);
  stats_cmd->add_option("--thresholds", stats_args.thresholds, "e.g. 1,10,100");
  stats_cmd->add_option("--bins", stats_args.bins, "Bin edges, e.g. 0,0.25,0.5,0.75,1");
  stats_cmd->add_option("--max-k", stats_args.max_k)->check(CLI::PositiveNumber);

  NoveltyArgs novelty_args;
  auto* novelty_cmd = app.add_subcommand("novelty", "Spans of a text found in the indexes");
  novelty_cmd->add_option("--index", novelty_args.indexes)->check(CLI::ExistingFile);
  auto* text_opt = novelty_cmd->add_option("--text", novelty_args.text);
  auto* file_opt =
      novelty_cmd->add_option("--text-file", novelty_args.text_file)->check(CLI::ExistingFile);
  text_opt->excludes(file_opt);
  novelty_cmd->add_option("--min-len", novelty_args.min_len)->check(CLI::PositiveNumber);
  novelty_cmd->add_option("--threshold", novelty_args.threshold)->check(CLI::PositiveNumber);

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--index", serve_args.indexes)->check(CLI::ExistingFile);
  serve_cmd->add_option("--host", serve_args.host);
  serve_cmd->add_option("--port", serve_args.port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--data-dir", serve_args.data_dir);
  serve_cmd->add_option("--job-workers", serve_args.job_workers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    cli::PipelineConfig cfg;
    if (!g.config_path.empty() && !serve_cmd->parsed()) {
      cfg = cli::load_pipeline_config(g.config_path);
    }
    if (dedup_cmd->parsed()) return run_dedup(g, cfg, dedup_args);
    if (build_cmd->parsed()) return run_build(g, build_args);
    if (count_cmd->parsed()) return run_count(g, cfg, count_args);
    if (stats_cmd->parsed()) return run_stats(g, cfg, stats_args);
    if (novelty_cmd->parsed()) {
      if (novelty_args.text.empty() && novelty_args.text_file.empty()) {
        throw UsageError("novelty needs --text or --text-file");
      }
      return run_novelty(g, cfg, novelty_args);
    }
    if (serve_cmd->parsed()) return run_serve(g, serve_args);
  } catch (const koala::Error& e) {
    std::cerr << "koala: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "koala: internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
