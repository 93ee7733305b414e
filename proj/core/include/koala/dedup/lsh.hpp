#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "koala/dedup/minhash.hpp"

namespace koala::dedup {

struct LshConfig {
  std::size_t bands = 50;
  std::size_t rows_per_band = 2;
  double jaccard_threshold = 0.95;

  // Throws InvalidArgument unless bands * rows_per_band == signature_length
  // and the threshold lies in (0, 1].
  void validate(std::size_t signature_length) const;

  // Probability that a pair with Jaccard `j` shares at least one band.
  double candidate_probability(double j) const;

  bool operator==(const LshConfig&) const = default;
};

// Unordered pair stored as (smaller, larger).
using DocPair = std::pair<std::string, std::string>;

// For each signature, ascending indices of the other signatures that agree
// with it on every row of at least one band.
std::vector<std::vector<std::size_t>> lsh_neighbors(
    std::span<const MinHashSignature> signatures, const LshConfig& cfg);

// All candidate pairs by doc_id. Throws IncomparableSignatures on mixed
// seeds and InvalidArgument when the config does not tile the signature.
std::set<DocPair> lsh_candidates(std::span<const MinHashSignature> signatures,
                                 const LshConfig& cfg);

}  // namespace koala::dedup
