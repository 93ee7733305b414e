#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "koala/error.hpp"

namespace koala::service {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::vector<std::filesystem::path> index_paths;
  // Corpora answering live queries (/count, /overlap, /novelty). Empty means
  // every loaded corpus. Batch jobs always use every loaded corpus.
  std::vector<std::string> live_corpora;

  std::size_t live_limit_bytes = 2'097'152;
  std::size_t batch_limit_bytes = 512ULL * 1024 * 1024;
  std::size_t novelty_limit_bytes = 64 * 1024;
  std::size_t max_query_tokens = 256;

  unsigned http_threads = 4;
  unsigned job_workers = 1;
  std::filesystem::path data_dir = "koala-data";
  std::chrono::seconds job_retention{7 * 24 * 3600};

  bool request_log = true;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

// key = value lines; '#' and ';' start comments. Keys may sit at the top level
// or under a [service] section. Unknown keys are errors.
//
//   host, port, index_paths (comma separated), live_corpora, live_limit_bytes,
//   batch_limit_bytes, novelty_limit_bytes, max_query_tokens, http_threads,
//   job_workers, data_dir, job_retention_seconds, request_log
ServiceConfig parse_config(std::string_view text);
ServiceConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;

// KOALA_<KEY> (upper case) overrides the matching key, e.g. KOALA_PORT or
// KOALA_INDEX_PATHS.
void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& getenv);
void apply_env_overrides(ServiceConfig& cfg);

}  // namespace koala::service
