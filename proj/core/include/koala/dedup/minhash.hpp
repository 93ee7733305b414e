#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "koala/error.hpp"
#include "koala/textprep/tokenize.hpp"

namespace koala::dedup {

inline constexpr std::size_t kDefaultPermutations = 100;

// Distinct unigram tokens of a document, kept sorted.
struct ShingleSet {
  std::string doc_id;
  std::vector<std::string> shingles;

  std::size_t size() const { return shingles.size(); }
  bool empty() const { return shingles.empty(); }
};

struct MinHashSignature {
  std::string doc_id;
  std::vector<std::uint64_t> values;
  std::uint64_t permutation_seed = 0;
  // Set for the sentinel signature of an empty shingle set. All values are
  // then UINT64_MAX.
  bool empty_set = false;
};

// Raised when two signatures were produced with different seeds or lengths.
class IncomparableSignatures : public Error {
 public:
  using Error::Error;
};

ShingleSet shingle(const textprep::TokenSequence& doc);

// Builds a ShingleSet from arbitrary tokens (deduplicates and sorts).
ShingleSet make_shingle_set(std::string doc_id,
                            std::vector<std::string> tokens);

// Seeded 64-bit hash of the i-th permutation. Exposed for tests.
std::uint64_t permutation_hash(std::string_view token, std::uint64_t seed,
                               std::size_t permutation);

MinHashSignature minhash_signature(
    const ShingleSet& s, std::uint64_t seed,
    std::size_t permutations = kDefaultPermutations);

// Fraction of agreeing slots. Two empty-set sentinels compare as 1.0, a
// sentinel against a non-empty signature as 0.0.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// |a ∩ b| / |a ∪ b| with 0/0 defined as 1.
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

}  // namespace koala::dedup
