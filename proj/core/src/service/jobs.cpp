#include "koala/service/jobs.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "koala/error.hpp"

namespace koala::service {
namespace fs = std::filesystem;

namespace {

constexpr auto kIdlePurgeInterval = std::chrono::seconds(60);

JobStatus status_from(const std::string& s) {
  if (s == "queued") return JobStatus::kQueued;
  if (s == "running") return JobStatus::kRunning;
  if (s == "done") return JobStatus::kDone;
  if (s == "failed") return JobStatus::kFailed;
  throw Error("job catalog: unknown status " + s);
}

JobRecord record_from(const nlohmann::json& j) {
  JobRecord r;
  r.job_id = j.at("job_id").get<std::string>();
  r.sequence = j.at("sequence").get<std::uint64_t>();
  r.status = status_from(j.at("status").get<std::string>());
  r.params = j.at("params");
  r.input_bytes = j.at("input_bytes").get<std::uint64_t>();
  r.submitted_at = j.at("submitted_at").get<std::int64_t>();
  r.started_at = j.at("started_at").get<std::int64_t>();
  r.finished_at = j.at("finished_at").get<std::int64_t>();
  r.error = j.at("error").get<std::string>();
  return r;
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

const char* to_string(JobStatus s) {
  switch (s) {
    case JobStatus::kQueued: return "queued";
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
  }
  return "unknown";
}

nlohmann::json to_json(const JobRecord& r) {
  return {{"job_id", r.job_id},
          {"sequence", r.sequence},
          {"status", to_string(r.status)},
          {"params", r.params},
          {"input_bytes", r.input_bytes},
          {"submitted_at", r.submitted_at},
          {"started_at", r.started_at},
          {"finished_at", r.finished_at},
          {"error", r.error}};
}

JobManager::JobManager(JobManagerOptions options, JobRunner runner)
    : options_(std::move(options)), runner_(std::move(runner)) {
  if (options_.workers == 0) throw InvalidArgument("job workers must be >= 1");
  fs::create_directories(options_.data_dir / "jobs");
  load_catalog();
  {
    std::lock_guard lock(mu_);
    purge_locked();
    save_catalog_locked();
  }
  for (unsigned i = 0; i < options_.workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() { shutdown(); }

void JobManager::shutdown() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  workers_.clear();
}

bool JobManager::valid_job_id(std::string_view id) {
  return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

std::int64_t JobManager::now_seconds() const {
  return std::chrono::duration_cast<std::chrono::seconds>(
             options_.clock().time_since_epoch())
      .count();
}

fs::path JobManager::input_path(const std::string& id) const {
  return options_.data_dir / "jobs" / (id + ".input");
}

fs::path JobManager::result_path(const std::string& id) const {
  return options_.data_dir / "jobs" / (id + ".result.json");
}

std::string JobManager::new_job_id() {
  std::random_device rd;
  std::ostringstream out;
  out << std::hex;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(rd()));
    out << buf;
  }
  return out.str();
}

void JobManager::save_catalog_locked() const {
  std::vector<const JobRecord*> ordered;
  for (const auto& [id, r] : jobs_) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const JobRecord* a, const JobRecord* b) { return a->sequence < b->sequence; });
  auto arr = nlohmann::json::array();
  for (const auto* r : ordered) arr.push_back(to_json(*r));
  const nlohmann::json doc = {{"jobs", arr}, {"next_sequence", next_sequence_}};
  write_file_atomic(options_.data_dir / "catalog.json", doc.dump(2));
}

void JobManager::load_catalog() {
  const auto path = options_.data_dir / "catalog.json";
  if (!fs::exists(path)) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("job catalog " + path.string() + " is corrupt: " + e.what());
  }
  std::lock_guard lock(mu_);
  next_sequence_ = doc.value("next_sequence", std::uint64_t{0});
  for (const auto& j : doc.at("jobs")) {
    auto r = record_from(j);
    next_sequence_ = std::max(next_sequence_, r.sequence + 1);
    if (r.status == JobStatus::kRunning) {
      r.status = JobStatus::kFailed;
      r.error = "interrupted by a service restart";
      r.finished_at = now_seconds();
    } else if (r.status == JobStatus::kQueued) {
      if (fs::exists(input_path(r.job_id))) {
        queue_.push_back(r.job_id);
      } else {
        r.status = JobStatus::kFailed;
        r.error = "input lost before the job ran";
        r.finished_at = now_seconds();
      }
    }
    jobs_.emplace(r.job_id, std::move(r));
  }
  std::stable_sort(queue_.begin(), queue_.end(), [&](const std::string& a, const std::string& b) {
    return jobs_.at(a).sequence < jobs_.at(b).sequence;
  });
}

std::string JobManager::submit(std::string_view input, nlohmann::json params) {
  std::string id;
  {
    std::lock_guard lock(mu_);
    if (stopping_) throw Error("job manager is shutting down");
    do {
      id = new_job_id();
    } while (jobs_.count(id));
  }
  write_file_atomic(input_path(id), input);

  std::lock_guard lock(mu_);
  JobRecord r;
  r.job_id = id;
  r.sequence = next_sequence_++;
  r.params = std::move(params);
  r.input_bytes = input.size();
  r.submitted_at = now_seconds();
  jobs_.emplace(id, std::move(r));
  queue_.push_back(id);
  purge_locked();
  save_catalog_locked();
  cv_.notify_one();
  return id;
}

std::optional<JobRecord> JobManager::get(const std::string& job_id) const {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> JobManager::result(const std::string& job_id) const {
  {
    std::lock_guard lock(mu_);
    const auto it = jobs_.find(job_id);
    if (it == jobs_.end() || it->second.status != JobStatus::kDone) return std::nullopt;
  }
  // Result files are written once, before the job is marked done.
  return read_file(result_path(job_id));
}

std::size_t JobManager::purge_expired() {
  std::lock_guard lock(mu_);
  const auto n = purge_locked();
  if (n) save_catalog_locked();
  return n;
}

std::size_t JobManager::purge_locked() {
  const auto now = now_seconds();
  const auto keep = options_.retention.count();
  std::size_t removed = 0;
  for (auto it = jobs_.begin(); it != jobs_.end();) {
    const auto& r = it->second;
    const bool finished = r.status == JobStatus::kDone || r.status == JobStatus::kFailed;
    if (finished && r.finished_at + keep <= now) {
      std::error_code ec;
      fs::remove(result_path(r.job_id), ec);
      fs::remove(input_path(r.job_id), ec);
      it = jobs_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

void JobManager::worker_loop() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait_for(lock, kIdlePurgeInterval, [&] { return stopping_ || !queue_.empty(); });
    if (stopping_) return;
    if (queue_.empty()) {
      if (purge_locked()) save_catalog_locked();
      continue;
    }
    const std::string id = queue_.front();
    queue_.pop_front();
    auto& rec = jobs_.at(id);
    rec.status = JobStatus::kRunning;
    rec.started_at = now_seconds();
    const nlohmann::json params = rec.params;
    save_catalog_locked();
    lock.unlock();

    std::string error;
    try {
      const auto input = read_file(input_path(id));
      const auto out = runner_(input, params);
      write_file_atomic(result_path(id), out.dump());
    } catch (const std::exception& e) {
      error = e.what();
      if (error.empty()) error = "job failed";
    }
    std::error_code ec;
    fs::remove(input_path(id), ec);

    lock.lock();
    auto& done = jobs_.at(id);
    done.status = error.empty() ? JobStatus::kDone : JobStatus::kFailed;
    done.error = error;
    done.finished_at = now_seconds();
    purge_locked();
    save_catalog_locked();
  }
}

}  // namespace koala::service
