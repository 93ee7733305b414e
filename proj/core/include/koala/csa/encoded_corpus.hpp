#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "koala/csa/vocabulary.hpp"
#include "koala/textprep/tokenize.hpp"

namespace koala::csa {

// doc_1 SEP doc_2 SEP ... doc_n TERM over vocabulary symbols.
struct EncodedCorpus {
  std::vector<Symbol> symbols;
  std::vector<std::uint64_t> doc_offsets;  // start of each document
  std::vector<std::string> doc_ids;
  Vocabulary vocabulary;

  std::size_t doc_count() const { return doc_offsets.size(); }
  // Real tokens only (separators and the terminator excluded).
  std::uint64_t token_count() const;
};

// Incremental encoder so that large corpora never need all their token
// strings in memory at once. Empty documents contribute nothing.
class CorpusEncoder {
 public:
  void add_document(std::string doc_id, std::span<const std::string> tokens);
  void add_document(std::string doc_id, std::span<const std::string_view> tokens);

  // Appends the terminator and hands over the corpus. The encoder is left
  // empty.
  EncodedCorpus finish();

  std::uint64_t symbol_count() const { return corpus_.symbols.size(); }

 private:
  template <class Token>
  void add(std::string doc_id, std::span<const Token> tokens);

  EncodedCorpus corpus_;
};

EncodedCorpus encode_corpus(std::span<const textprep::TokenSequence> docs);

}  // namespace koala::csa
