#include "koala/service/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace koala::service {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  const auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(value, &used);
    if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, std::string value) {
  std::transform(value.begin(), value.end(), value.begin(), ::tolower);
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

void set_key(ServiceConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "host") {
    cfg.host = value;
  } else if (key == "port") {
    const auto p = to_uint(key, value);
    if (p > 65535) throw ConfigError("port out of range");
    cfg.port = static_cast<int>(p);
  } else if (key == "index_paths") {
    cfg.index_paths.clear();
    for (auto& p : split_list(value)) cfg.index_paths.emplace_back(p);
  } else if (key == "live_corpora") {
    cfg.live_corpora = split_list(value);
  } else if (key == "live_limit_bytes") {
    cfg.live_limit_bytes = to_uint(key, value);
  } else if (key == "batch_limit_bytes") {
    cfg.batch_limit_bytes = to_uint(key, value);
  } else if (key == "novelty_limit_bytes") {
    cfg.novelty_limit_bytes = to_uint(key, value);
  } else if (key == "max_query_tokens") {
    cfg.max_query_tokens = to_uint(key, value);
  } else if (key == "http_threads") {
    cfg.http_threads = static_cast<unsigned>(to_uint(key, value));
  } else if (key == "job_workers") {
    cfg.job_workers = static_cast<unsigned>(to_uint(key, value));
  } else if (key == "data_dir") {
    cfg.data_dir = value;
  } else if (key == "job_retention_seconds") {
    cfg.job_retention = std::chrono::seconds(to_uint(key, value));
  } else if (key == "request_log") {
    cfg.request_log = to_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

constexpr const char* kKeys[] = {
    "host",          "port",          "index_paths",         "live_corpora",
    "live_limit_bytes", "batch_limit_bytes", "novelty_limit_bytes", "max_query_tokens",
    "http_threads",  "job_workers",   "data_dir",            "job_retention_seconds",
    "request_log"};

}  // namespace

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  if (live_limit_bytes == 0) throw ConfigError("live_limit_bytes must be > 0");
  if (batch_limit_bytes < live_limit_bytes) {
    throw ConfigError("batch_limit_bytes must be >= live_limit_bytes");
  }
  if (novelty_limit_bytes == 0) throw ConfigError("novelty_limit_bytes must be > 0");
  if (max_query_tokens == 0) throw ConfigError("max_query_tokens must be > 0");
  if (http_threads == 0) throw ConfigError("http_threads must be > 0");
  if (job_workers == 0) throw ConfigError("job_workers must be > 0");
  if (data_dir.empty()) throw ConfigError("data_dir must be set");
}

ServiceConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  ServiceConfig cfg;
  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      set_key(cfg, key, node.data());
    } else if (key == "service") {
      for (const auto& [sub, value] : node) set_key(cfg, sub, value.data());
    }
    // Other sections belong to other tools sharing the file.
  }
  cfg.validate();
  return cfg;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& getenv) {
  for (const char* key : kKeys) {
    std::string name = "KOALA_";
    for (const char* c = key; *c; ++c) name += static_cast<char>(::toupper(*c));
    if (const char* value = getenv(name.c_str())) set_key(cfg, key, value);
  }
  cfg.validate();
}

void apply_env_overrides(ServiceConfig& cfg) {
  apply_env_overrides(cfg, [](const char* name) { return std::getenv(name); });
}

}  // namespace koala::service
