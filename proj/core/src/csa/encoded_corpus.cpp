#include "koala/csa/encoded_corpus.hpp"

namespace koala::csa {

std::uint64_t EncodedCorpus::token_count() const {
  // Every document but the last is followed by one separator, plus one
  // terminator overall.
  const std::uint64_t sentinels = doc_count() == 0 ? 1 : doc_count();
  return symbols.size() - sentinels;
}

template <class Token>
void CorpusEncoder::add(std::string doc_id, std::span<const Token> tokens) {
  if (tokens.empty()) return;
  if (!corpus_.doc_offsets.empty()) corpus_.symbols.push_back(kSeparator);
  corpus_.doc_offsets.push_back(corpus_.symbols.size());
  corpus_.doc_ids.push_back(std::move(doc_id));
  for (const auto& t : tokens) {
    corpus_.symbols.push_back(corpus_.vocabulary.intern(t));
  }
}

void CorpusEncoder::add_document(std::string doc_id,
                                 std::span<const std::string> tokens) {
  add(std::move(doc_id), tokens);
}

void CorpusEncoder::add_document(std::string doc_id,
                                 std::span<const std::string_view> tokens) {
  add(std::move(doc_id), tokens);
}

EncodedCorpus CorpusEncoder::finish() {
  corpus_.symbols.push_back(kTerminator);
  corpus_.symbols.shrink_to_fit();
  EncodedCorpus out = std::move(corpus_);
  corpus_ = EncodedCorpus{};
  return out;
}

EncodedCorpus encode_corpus(std::span<const textprep::TokenSequence> docs) {
  CorpusEncoder enc;
  for (const auto& d : docs) {
    enc.add_document(d.doc_id, std::span<const std::string>(d.tokens));
  }
  return enc.finish();
}

}  // namespace koala::csa
