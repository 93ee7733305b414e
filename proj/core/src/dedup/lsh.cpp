#include "koala/dedup/lsh.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace koala::dedup {
namespace {

struct BandKey {
  bool empty_set;
  std::vector<std::uint64_t> rows;

  bool operator==(const BandKey&) const = default;
};

struct BandKeyHash {
  std::size_t operator()(const BandKey& k) const {
    std::uint64_t h = k.empty_set ? 0x5bd1e995ULL : 0;
    for (auto v : k.rows) {
      h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

void check_comparable(std::span<const MinHashSignature> signatures,
                      const LshConfig& cfg) {
  if (signatures.empty()) return;
  const auto& first = signatures.front();
  cfg.validate(first.values.size());
  for (const auto& s : signatures) {
    if (s.permutation_seed != first.permutation_seed) {
      throw IncomparableSignatures("signatures use different permutation seeds");
    }
    if (s.values.size() != first.values.size()) {
      throw IncomparableSignatures("signature lengths differ");
    }
  }
}

}  // namespace

void LshConfig::validate(std::size_t signature_length) const {
  if (bands == 0 || rows_per_band == 0 ||
      bands * rows_per_band != signature_length) {
    throw InvalidArgument("LSH bands x rows_per_band must equal the signature length (" +
                          std::to_string(signature_length) + ")");
  }
  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw InvalidArgument("jaccard_threshold must lie in (0, 1]");
  }
}

double LshConfig::candidate_probability(double j) const {
  return 1.0 - std::pow(1.0 - std::pow(j, static_cast<double>(rows_per_band)),
                        static_cast<double>(bands));
}

std::vector<std::vector<std::size_t>> lsh_neighbors(
    std::span<const MinHashSignature> signatures, const LshConfig& cfg) {
  check_comparable(signatures, cfg);
  std::vector<std::vector<std::size_t>> neighbors(signatures.size());
  for (std::size_t band = 0; band < cfg.bands; ++band) {
    std::unordered_map<BandKey, std::vector<std::size_t>, BandKeyHash> buckets;
    const auto first_row = band * cfg.rows_per_band;
    for (std::size_t i = 0; i < signatures.size(); ++i) {
      const auto& v = signatures[i].values;
      BandKey key{signatures[i].empty_set,
                  {v.begin() + first_row,
                   v.begin() + first_row + cfg.rows_per_band}};
      buckets[std::move(key)].push_back(i);
    }
    for (const auto& [key, members] : buckets) {
      for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
          neighbors[members[a]].push_back(members[b]);
          neighbors[members[b]].push_back(members[a]);
        }
      }
    }
  }
  for (auto& n : neighbors) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
  return neighbors;
}

std::set<DocPair> lsh_candidates(std::span<const MinHashSignature> signatures,
                                 const LshConfig& cfg) {
  std::set<DocPair> pairs;
  const auto neighbors = lsh_neighbors(signatures, cfg);
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (auto j : neighbors[i]) {
      if (j <= i) continue;
      const auto& a = signatures[i].doc_id;
      const auto& b = signatures[j].doc_id;
      pairs.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return pairs;
}

}  // namespace koala::dedup
