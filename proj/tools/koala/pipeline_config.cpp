#include "pipeline_config.hpp"

#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "koala/service/config.hpp"

namespace koala::cli {
namespace {

namespace pt = boost::property_tree;
using service::ConfigError;

template <class T>
T get(const pt::ptree& node, const std::string& key) {
  try {
    return node.get_value<T>();
  } catch (const pt::ptree_error&) {
    throw ConfigError("bad value for " + key + ": '" + node.data() + "'");
  }
}

std::vector<std::filesystem::path> paths(const std::string& csv) {
  std::vector<std::filesystem::path> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

}  // namespace

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  PipelineConfig cfg;
  for (const auto& [section, node] : tree) {
    if (node.empty()) continue;  // top-level keys belong to the service
    for (const auto& [key, value] : node) {
      const std::string name = section + "." + key;
      try {
        if (section == "dedup") {
          if (key == "threshold") {
            cfg.dedup.lsh.jaccard_threshold = get<double>(value, name);
          } else if (key == "permutations") {
            cfg.dedup.permutations = get<std::size_t>(value, name);
          } else if (key == "bands") {
            cfg.dedup.lsh.bands = get<std::size_t>(value, name);
          } else if (key == "rows_per_band") {
            cfg.dedup.lsh.rows_per_band = get<std::size_t>(value, name);
          } else if (key == "seed") {
            cfg.dedup.seed = get<std::uint64_t>(value, name);
          } else if (key == "batch_size") {
            cfg.batch_size = get<std::size_t>(value, name);
          } else if (key == "threads") {
            cfg.dedup.threads = get<unsigned>(value, name);
          } else {
            throw ConfigError("unknown config key " + name);
          }
        } else if (section == "stats") {
          if (key == "thresholds") {
            cfg.stats.grid = stats::parse_threshold_grid(value.data());
          } else if (key == "bins") {
            cfg.stats.bins = stats::parse_length_bins(value.data());
          } else if (key == "max_k" || key == "max_n") {
            cfg.stats.max_k = get<std::size_t>(value, name);
          } else {
            throw ConfigError("unknown config key " + name);
          }
        } else if (section == "index") {
          if (key == "paths") {
            cfg.index_paths = paths(value.data());
          } else {
            throw ConfigError("unknown config key " + name);
          }
        } else if (section == "output") {
          if (key == "dir") {
            cfg.output_dir = value.data();
          } else {
            throw ConfigError("unknown config key " + name);
          }
        } else if (section != "service") {
          throw ConfigError("unknown config section [" + section + "]");
        }
      } catch (const InvalidArgument& e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
  return cfg;
}

}  // namespace koala::cli
