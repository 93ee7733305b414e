#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "koala/dedup/lsh.hpp"
#include "koala/dedup/minhash.hpp"
#include "koala/textprep/tokenize.hpp"

namespace koala::dedup {

struct DedupParams {
  LshConfig lsh;
  std::uint64_t seed = 0;
  std::size_t permutations = kDefaultPermutations;
  unsigned threads = 1;  // signature workers; output does not depend on it

  void validate() const { lsh.validate(permutations); }
  bool compatible_with(const DedupParams& other) const {
    return lsh == other.lsh && seed == other.seed &&
           permutations == other.permutations;
  }
};

// One ledger entry: `removed_id` duplicates the retained `kept_id`.
struct Removal {
  std::string removed_id;
  std::string kept_id;
  double exact_jaccard = 0.0;

  bool operator==(const Removal&) const = default;
};

struct DedupResult {
  std::vector<std::string> retained;  // ascending doc_id
  std::vector<Removal> removed;       // ascending removed_id

  std::size_t input_count() const { return retained.size() + removed.size(); }
};

// Per-document data kept so that batches can be merged later.
struct DocumentSketch {
  ShingleSet shingles;
  MinHashSignature signature;
};

// A deduplicated batch: the outcome plus the sketches of every input
// document (retained and removed), sorted by doc_id.
struct DedupBatch {
  DedupParams params;
  DedupResult result;
  std::vector<DocumentSketch> sketches;
};

std::vector<DocumentSketch> sketch_documents(
    std::span<const textprep::TokenSequence> docs, const DedupParams& params);

// Documents are visited in ascending doc_id order. A document is removed
// when an already retained LSH candidate has exact Jaccard >= threshold with
// it; otherwise it is retained. doc_ids must be unique.
DedupBatch deduplicate_batch(std::span<const textprep::TokenSequence> docs,
                             const DedupParams& params);

// Combines two independently deduplicated batches into exactly the outcome
// a single pass over the union would produce, reusing their sketches.
// Throws InvalidArgument on mismatched params or a doc_id present in both.
DedupBatch merge_deduplicated(DedupBatch a, DedupBatch b);

}  // namespace koala::dedup
