#include "koala/service/registry.hpp"

#include "koala/csa/index_io.hpp"

namespace koala::service {

CorpusInfo describe(const csa::FmIndex& index) {
  const auto& m = index.metadata();
  return {m.corpus_id, m.token_count, m.doc_count, index.size_in_bytes(), m.build_timestamp,
          m.format_version};
}

IndexRegistry::IndexRegistry() : current_(std::make_shared<const stats::IndexSet>()) {}

IndexRegistry::Snapshot IndexRegistry::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

std::vector<LoadOutcome> IndexRegistry::load(const std::vector<std::filesystem::path>& paths) {
  stats::IndexSet next;
  std::vector<LoadOutcome> outcomes;
  for (const auto& path : paths) {
    LoadOutcome out;
    out.path = path;
    try {
      auto index = std::make_shared<const csa::FmIndex>(csa::load_index(path));
      out.corpus_id = index->metadata().corpus_id;
      next.add(std::move(index));
      out.loaded = true;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    outcomes.push_back(std::move(out));
  }
  auto snap = std::make_shared<const stats::IndexSet>(std::move(next));
  std::lock_guard lock(mu_);
  current_ = std::move(snap);
  last_load_ = outcomes;
  return outcomes;
}

void IndexRegistry::replace(stats::IndexSet set) {
  auto snap = std::make_shared<const stats::IndexSet>(std::move(set));
  std::lock_guard lock(mu_);
  current_ = std::move(snap);
}

std::vector<CorpusInfo> IndexRegistry::list() const {
  const auto snap = snapshot();
  std::vector<CorpusInfo> out;
  for (std::size_t i = 0; i < snap->size(); ++i) out.push_back(describe(snap->at(i)));
  return out;
}

std::vector<LoadOutcome> IndexRegistry::last_load() const {
  std::lock_guard lock(mu_);
  return last_load_;
}

}  // namespace koala::service
