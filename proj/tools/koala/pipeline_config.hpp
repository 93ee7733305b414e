#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "koala/dedup/deduplicate.hpp"
#include "koala/stats/overlap.hpp"

namespace koala::cli {

// Settings shared by the subcommands, read from the [dedup], [stats] and
// [index] sections of --config. Command-line flags override them.
struct PipelineConfig {
  dedup::DedupParams dedup;
  std::size_t batch_size = 0;  // 0 = one batch
  stats::OverlapParams stats;
  std::vector<std::filesystem::path> index_paths;
  std::optional<std::filesystem::path> output_dir;
};

// Throws service::ConfigError on unknown keys or bad values.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace koala::cli
