#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace koala::service {

enum class JobStatus { kQueued, kRunning, kDone, kFailed };

const char* to_string(JobStatus s);

struct JobRecord {
  std::string job_id;
  std::uint64_t sequence = 0;  // submission order
  JobStatus status = JobStatus::kQueued;
  nlohmann::json params;
  std::uint64_t input_bytes = 0;
  // Unix seconds; 0 while unset.
  std::int64_t submitted_at = 0;
  std::int64_t started_at = 0;
  std::int64_t finished_at = 0;
  std::string error;
};

nlohmann::json to_json(const JobRecord& r);

// Produces the result document of a job. Exceptions mark the job failed.
using JobRunner =
    std::function<nlohmann::json(const std::string& input, const nlohmann::json& params)>;

struct JobManagerOptions {
  std::filesystem::path data_dir;
  unsigned workers = 1;
  std::chrono::seconds retention{7 * 24 * 3600};
  std::function<std::chrono::system_clock::time_point()> clock = [] {
    return std::chrono::system_clock::now();
  };
};

// FIFO job queue with a fixed worker pool. Inputs, results and a catalog of
// job records live under data_dir, so finished results survive restarts.
// Jobs found queued on startup are queued again; jobs found running are
// marked failed. Finished jobs are deleted once older than the retention.
class JobManager {
 public:
  JobManager(JobManagerOptions options, JobRunner runner);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  std::string submit(std::string_view input, nlohmann::json params);

  std::optional<JobRecord> get(const std::string& job_id) const;

  // Serialized result of a done job; nullopt otherwise.
  std::optional<std::string> result(const std::string& job_id) const;

  // Removes finished jobs past the retention. Returns how many went.
  std::size_t purge_expired();

  // Lets running jobs finish, then joins the workers. Idempotent.
  void shutdown();

  // 32 lowercase hex digits.
  static bool valid_job_id(std::string_view id);

 private:
  std::int64_t now_seconds() const;
  std::filesystem::path input_path(const std::string& id) const;
  std::filesystem::path result_path(const std::string& id) const;
  void save_catalog_locked() const;
  void load_catalog();
  std::size_t purge_locked();
  void worker_loop();
  std::string new_job_id();

  JobManagerOptions options_;
  JobRunner runner_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, JobRecord> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_sequence_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace koala::service
