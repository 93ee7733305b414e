#pragma once

#include <functional>
#include <memory>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "koala/service/config.hpp"
#include "koala/service/jobs.hpp"
#include "koala/service/registry.hpp"
#include "koala/stats/overlap.hpp"

namespace httplib {
class Server;
}

namespace koala::service {

// Receives one JSON object per request.
using LogSink = std::function<void(const std::string& line)>;

// Writes to stderr, one line per call.
LogSink stderr_log_sink();

// Canonical job/overlap parameters as JSON: thresholds, bin edges, max_k.
nlohmann::json params_to_json(const stats::OverlapParams& p);
stats::OverlapParams params_from_json(const nlohmann::json& j);

// The overlap report document served by POST /overlap and stored by jobs.
nlohmann::json overlap_document(std::string_view text, const stats::IndexSet& indexes,
                                const stats::OverlapParams& params);

// HTTP front end over a registry and a job manager:
//
//   GET  /corpora               loaded corpora
//   GET  /count?q=&corpus=      per-corpus counts of one query
//   POST /overlap               n-gram file report, synchronous, size-capped
//   POST /jobs                  queue the same report for a large file
//   GET  /jobs/{id}             job record
//   GET  /jobs/{id}/result      finished report
//   POST /novelty               overlap spans of generated text
//   GET  /health
class Server {
 public:
  Server(ServiceConfig config, std::shared_ptr<IndexRegistry> registry,
         LogSink log = stderr_log_sink());
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds, then serves on a background thread. Returns the bound port.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();

  int port() const { return port_; }
  const ServiceConfig& config() const { return config_; }
  JobManager& jobs() { return *jobs_; }

 private:
  void install_routes();
  void bind();
  stats::IndexSet live_set() const;

  ServiceConfig config_;
  std::shared_ptr<IndexRegistry> registry_;
  LogSink log_;
  std::unique_ptr<JobManager> jobs_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace koala::service
