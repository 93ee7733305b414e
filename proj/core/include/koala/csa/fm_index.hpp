#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "koala/csa/encoded_corpus.hpp"
#include "koala/csa/vocabulary.hpp"
#include "koala/csa/wavelet_matrix.hpp"

namespace koala::csa {

inline constexpr std::uint32_t kFormatVersion = 1;

struct IndexMetadata {
  std::string corpus_id;
  std::uint64_t doc_count = 0;
  std::uint64_t token_count = 0;      // real tokens, sentinels excluded
  std::int64_t build_timestamp = 0;   // seconds since the Unix epoch
  std::uint32_t format_version = kFormatVersion;

  bool operator==(const IndexMetadata&) const = default;
};

// Half-open interval of suffix-array rows; its width is the number of
// occurrences of the pattern searched so far.
struct CountRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  std::uint64_t count() const { return hi - lo; }
  bool empty() const { return hi == lo; }
  bool operator==(const CountRange&) const = default;
};

// Instrumentation for backward search. Each step is one range update built
// from one c_table lookup and two symbol ranks.
struct SearchStats {
  std::uint64_t steps = 0;
  std::uint64_t c_table_lookups = 0;
  std::uint64_t rank_queries = 0;
  std::uint64_t bitvector_ranks = 0;
};

struct BuildOptions {
  std::string corpus_id;
  // Unset means "now".
  std::optional<std::int64_t> build_timestamp;
};

// Count-only FM-index over one encoded corpus: the BWT held in a wavelet
// matrix, the cumulative symbol table, and the vocabulary. The suffix array
// is discarded after construction. Instances are immutable and may be shared
// by any number of reader threads.
class FmIndex {
 public:
  static FmIndex build(const EncodedCorpus& corpus, const BuildOptions& opts);

  // Assembles an index from already-validated parts (used by the reader).
  FmIndex(IndexMetadata metadata, Vocabulary vocabulary,
          std::vector<std::uint64_t> c_table, WaveletMatrix bwt);

  const IndexMetadata& metadata() const { return metadata_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  // c_table()[c] = number of text symbols smaller than c; one extra trailing
  // entry equals text_length().
  std::span<const std::uint64_t> c_table() const { return c_table_; }
  const WaveletMatrix& bwt() const { return bwt_; }

  std::uint64_t text_length() const { return bwt_.size(); }
  std::size_t alphabet_size() const { return c_table_.size() - 1; }

  Symbol bwt_at(std::uint64_t i) const { return bwt_.access(i); }
  std::uint64_t rank(Symbol c, std::uint64_t i) const { return bwt_.rank(c, i); }

  CountRange full_range() const { return {0, text_length()}; }

  // One backward-search step: the range of c·u given the range of u.
  CountRange extend_left(CountRange range, Symbol c,
                         SearchStats* stats = nullptr) const;

  // Symbols of the pattern, or nullopt if any token is out of vocabulary.
  std::optional<std::vector<Symbol>> encode_pattern(
      std::span<const std::string> pattern) const;

  // Occurrences of the token pattern. Out-of-vocabulary tokens give 0
  // without searching. Throws InvalidArgument on an empty pattern.
  std::uint64_t count(std::span<const std::string> pattern,
                      SearchStats* stats = nullptr) const;
  std::uint64_t count_symbols(std::span<const Symbol> pattern,
                              SearchStats* stats = nullptr) const;

  // Inverts the BWT by LF-mapping.
  std::vector<Symbol> reconstruct_text() const;

  // In-memory footprint of the query structures.
  std::size_t size_in_bytes() const;

 private:
  IndexMetadata metadata_;
  Vocabulary vocabulary_;
  std::vector<std::uint64_t> c_table_;
  WaveletMatrix bwt_;
};

}  // namespace koala::csa
