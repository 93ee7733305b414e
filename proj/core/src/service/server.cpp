#include "koala/service/server.hpp"

#include <chrono>
#include <iostream>
#include <map>
#include <mutex>

#include <httplib.h>

#include "koala/error.hpp"
#include "koala/stats/report.hpp"
#include "koala/textprep/normalize.hpp"
#include "koala/textprep/tokenize.hpp"

namespace koala::service {
namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::json;

// Room for multipart boundaries and part headers on top of the file limit,
// and for JSON framing around novelty text.
constexpr std::size_t kMultipartSlack = 16 * 1024;
constexpr std::size_t kJsonSlack = 4 * 1024;
constexpr std::size_t kFieldLimit = 4 * 1024;
constexpr std::size_t kDefaultNoveltyMinLen = 5;

thread_local Clock::time_point t_request_start;

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}, {"status", status}});
}

struct Body {
  std::string content;  // raw body, or the "file" part of a multipart body
  std::map<std::string, std::string> fields;
  bool too_large = false;
};

// Reads the request body, keeping at most `limit` bytes of content. Oversize
// bodies are still drained so the connection stays usable.
Body read_body(const httplib::Request& req, httplib::Response& res,
               const httplib::ContentReader& reader, std::size_t limit) {
  Body b;
  const bool multipart = req.is_multipart_form_data();
  if (req.has_header("Content-Length")) {
    const auto declared = req.get_header_value_u64("Content-Length");
    b.too_large = declared > limit + (multipart ? kMultipartSlack : 0);
  }
  bool ok = true;
  if (multipart) {
    std::string* target = nullptr;
    std::size_t target_limit = 0;
    bool seen_file = false;
    ok = reader(
        [&](const httplib::MultipartFormData& part) {
          if (part.name == "file") {
            if (seen_file) throw HttpError(400, "more than one file part");
            seen_file = true;
            target = &b.content;
            target_limit = limit;
          } else {
            target = &b.fields[part.name];
            target_limit = kFieldLimit;
          }
          return true;
        },
        [&](const char* data, std::size_t n) {
          if (b.too_large || !target) return true;
          if (target->size() + n > target_limit) {
            if (target == &b.content) {
              b.too_large = true;
            } else {
              throw HttpError(400, "form field too long");
            }
            return true;
          }
          target->append(data, n);
          return true;
        });
    if (ok && !seen_file && !b.too_large) throw HttpError(400, "multipart body needs a 'file' part");
  } else {
    ok = reader([&](const char* data, std::size_t n) {
      if (b.too_large) return true;
      if (b.content.size() + n > limit) {
        b.too_large = true;
        b.content.clear();
        return true;
      }
      b.content.append(data, n);
      return true;
    });
  }
  if (!ok) {
    if (res.status == 413) b.too_large = true;
    if (!b.too_large) throw HttpError(400, "could not read request body");
  }
  if (b.too_large) {
    b.content.clear();
    throw HttpError(413, "body exceeds the " + std::to_string(limit) + " byte limit");
  }
  return b;
}

std::string param(const httplib::Request& req, const Body* body, const std::string& key) {
  if (body) {
    const auto it = body->fields.find(key);
    if (it != body->fields.end()) return it->second;
  }
  return req.has_param(key) ? req.get_param_value(key) : std::string();
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || v.front() == '-') {
    throw HttpError(400, key + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(n);
}

stats::OverlapParams request_params(const httplib::Request& req, const Body* body) {
  stats::OverlapParams p;
  try {
    if (const auto t = param(req, body, "thresholds"); !t.empty()) {
      p.grid = stats::parse_threshold_grid(t);
    }
    if (const auto b = param(req, body, "bins"); !b.empty()) p.bins = stats::parse_length_bins(b);
    auto k = param(req, body, "max_k");
    if (k.empty()) k = param(req, body, "max_n");
    if (!k.empty()) p.max_k = to_size("max_k", k);
    p.validate();
  } catch (const InvalidArgument& e) {
    throw HttpError(400, e.what());
  }
  return p;
}

void require_utf8(std::string_view text) {
  if (!textprep::is_valid_utf8(text)) throw HttpError(400, "body is not valid UTF-8");
}

}  // namespace

LogSink stderr_log_sink() {
  return [](const std::string& line) {
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::cerr << line << '\n';
  };
}

json params_to_json(const stats::OverlapParams& p) {
  std::vector<double> edges;
  for (const auto& b : p.bins.bins) edges.push_back(b.lo);
  if (!p.bins.bins.empty()) edges.push_back(p.bins.bins.back().hi);
  return {{"thresholds", p.grid.thresholds}, {"bins", edges}, {"max_k", p.max_k}};
}

stats::OverlapParams params_from_json(const json& j) {
  stats::OverlapParams p;
  p.grid.thresholds = j.at("thresholds").get<std::vector<std::uint64_t>>();
  const auto edges = j.at("bins").get<std::vector<double>>();
  p.bins.bins.clear();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) p.bins.bins.push_back({edges[i], edges[i + 1]});
  p.max_k = j.at("max_k").get<std::size_t>();
  p.validate();
  return p;
}

json overlap_document(std::string_view text, const stats::IndexSet& indexes,
                      const stats::OverlapParams& params) {
  auto doc = stats::to_json(stats::build_overlap_report(text, indexes, params));
  doc["params"] = params_to_json(params);
  return doc;
}

Server::Server(ServiceConfig config, std::shared_ptr<IndexRegistry> registry, LogSink log)
    : config_(std::move(config)),
      registry_(std::move(registry)),
      log_(std::move(log)),
      http_(std::make_unique<httplib::Server>()) {
  config_.validate();
  if (!registry_) throw InvalidArgument("server needs a registry");
  JobManagerOptions opts;
  opts.data_dir = config_.data_dir;
  opts.workers = config_.job_workers;
  opts.retention = config_.job_retention;
  auto reg = registry_;
  jobs_ = std::make_unique<JobManager>(opts, [reg](const std::string& input, const json& params) {
    const auto snap = reg->snapshot();
    return overlap_document(input, *snap, params_from_json(params));
  });
  install_routes();
}

Server::~Server() {
  stop();
  jobs_->shutdown();
}

stats::IndexSet Server::live_set() const {
  const auto snap = registry_->snapshot();
  if (config_.live_corpora.empty()) return *snap;
  stats::IndexSet live;
  for (const auto& id : config_.live_corpora) {
    if (auto idx = snap->find(id)) live.add(std::move(idx));
  }
  return live;
}

void Server::install_routes() {
  auto& s = *http_;
  const unsigned threads = config_.http_threads;
  s.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  s.set_payload_max_length(config_.batch_limit_bytes + kMultipartSlack);

  s.set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
    t_request_start = Clock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  if (config_.request_log) {
    s.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      const auto ms = std::chrono::duration<double, std::milli>(Clock::now() - t_request_start);
      const json line = {
          {"ts", std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::system_clock::now().time_since_epoch())
                     .count()},
          {"method", req.method},
          {"path", req.path},
          {"status", res.status},
          {"bytes_out", res.body.size()},
          {"duration_ms", ms.count()},
          {"remote", req.remote_addr}};
      log_(line.dump());
    });
  }
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_error(res, res.status, httplib::status_message(res.status));
    }
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const HttpError& e) {
          send_error(res, e.status(), e.what());
        } catch (const InvalidArgument& e) {
          send_error(res, 400, e.what());
        } catch (const std::exception& e) {
          send_error(res, 500, e.what());
        } catch (...) {
          send_error(res, 500, "unknown error");
        }
      });

  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"corpora", registry_->snapshot()->size()}});
  });

  s.Get("/corpora", [this](const httplib::Request&, httplib::Response& res) {
    const auto live = live_set().corpus_ids();
    auto arr = json::array();
    for (const auto& c : registry_->list()) {
      arr.push_back({{"corpus_id", c.corpus_id},
                     {"token_count", c.token_count},
                     {"doc_count", c.doc_count},
                     {"index_size_bytes", c.index_size_bytes},
                     {"build_timestamp", c.build_timestamp},
                     {"format_version", c.format_version},
                     {"live", std::find(live.begin(), live.end(), c.corpus_id) != live.end()}});
    }
    send_json(res, 200, arr);
  });

  s.Get("/count", [this](const httplib::Request& req, httplib::Response& res) {
    const auto q = req.get_param_value("q");
    const auto tokens = textprep::prepare(q).tokens;
    if (tokens.empty()) throw HttpError(400, "query is empty");
    if (tokens.size() > config_.max_query_tokens) {
      throw HttpError(400, "query has " + std::to_string(tokens.size()) +
                               " tokens; the limit is " +
                               std::to_string(config_.max_query_tokens));
    }
    const auto live = live_set();
    std::string corpus = req.has_param("corpus") ? req.get_param_value("corpus") : "all";
    if (corpus.empty()) corpus = "all";
    stats::IndexSet scope;
    if (corpus == "all") {
      scope = live;
    } else {
      auto idx = live.find(corpus);
      if (!idx) throw HttpError(404, "unknown corpus '" + corpus + "'");
      scope.add(std::move(idx));
    }
    const auto ids = scope.corpus_ids();
    const auto counts = scope.per_corpus_count(tokens);
    json per_corpus = json::object();
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      per_corpus[ids[i]] = counts[i];
      total += counts[i];
    }
    send_json(res, 200,
              {{"query_tokens", tokens}, {"corpus", corpus}, {"per_corpus", per_corpus},
               {"total", total}});
  });

  s.Post("/overlap", [this](const httplib::Request& req, httplib::Response& res,
                            const httplib::ContentReader& reader) {
    const auto body = read_body(req, res, reader, config_.live_limit_bytes);
    require_utf8(body.content);
    const auto params = request_params(req, &body);
    const auto live = live_set();
    if (live.empty() && !textprep::prepare(body.content).tokens.empty()) {
      throw HttpError(503, "no corpora are loaded");
    }
    send_json(res, 200, overlap_document(body.content, live, params));
  });

  s.Post("/jobs", [this](const httplib::Request& req, httplib::Response& res,
                         const httplib::ContentReader& reader) {
    const auto body = read_body(req, res, reader, config_.batch_limit_bytes);
    require_utf8(body.content);
    const auto params = request_params(req, &body);
    const auto id = jobs_->submit(body.content, params_to_json(params));
    send_json(res, 202,
              {{"job_id", id},
               {"status", "queued"},
               {"status_url", "/jobs/" + id},
               {"result_url", "/jobs/" + id + "/result"}});
  });

  s.Get(R"(/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto rec = JobManager::valid_job_id(id) ? jobs_->get(id) : std::nullopt;
    if (!rec) throw HttpError(404, "unknown job");
    auto j = to_json(*rec);
    if (rec->status == JobStatus::kDone) j["result_url"] = "/jobs/" + id + "/result";
    send_json(res, 200, j);
  });

  s.Get(R"(/jobs/([^/]+)/result)", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto rec = JobManager::valid_job_id(id) ? jobs_->get(id) : std::nullopt;
    if (!rec) throw HttpError(404, "unknown job");
    if (rec->status != JobStatus::kDone) {
      throw HttpError(409, std::string("job is ") + to_string(rec->status));
    }
    auto result = jobs_->result(id);
    if (!result) throw HttpError(404, "result expired");
    res.status = 200;
    res.set_content(std::move(*result), "application/json");
  });

  s.Post("/novelty", [this](const httplib::Request& req, httplib::Response& res,
                            const httplib::ContentReader& reader) {
    const auto body = read_body(req, res, reader, config_.novelty_limit_bytes + kJsonSlack);
    json in;
    try {
      in = json::parse(body.content);
    } catch (const json::exception& e) {
      throw HttpError(400, std::string("invalid JSON: ") + e.what());
    }
    if (!in.is_object() || !in.contains("text") || !in["text"].is_string()) {
      throw HttpError(400, "body must be an object with a string 'text'");
    }
    const auto text = in["text"].get<std::string>();
    if (text.size() > config_.novelty_limit_bytes) {
      throw HttpError(413, "text exceeds the " + std::to_string(config_.novelty_limit_bytes) +
                               " byte limit");
    }
    auto positive = [&](const char* key, std::uint64_t fallback) -> std::uint64_t {
      if (!in.contains(key)) return fallback;
      const auto& v = in[key];
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw HttpError(400, std::string(key) + " must be an integer >= 1");
      }
      return v.get<std::uint64_t>();
    };
    const auto min_len = positive("min_len", kDefaultNoveltyMinLen);
    const auto threshold = positive("threshold", 1);
    const auto live = live_set();
    if (live.empty()) throw HttpError(503, "no corpora are loaded");
    const auto tokens = textprep::prepare(text).tokens;
    const auto spans = stats::highlight_overlaps(tokens, live, min_len, threshold);
    send_json(res, 200, stats::novelty_json(tokens, spans, live, min_len, threshold));
  });
}

void Server::bind() {
  if (config_.port == 0) {
    port_ = http_->bind_to_any_port(config_.host);
  } else {
    port_ = http_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) {
    throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
}

int Server::start() {
  bind();
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port_;
}

void Server::run() {
  bind();
  http_->listen_after_bind();
}

void Server::stop() {
  http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace koala::service
