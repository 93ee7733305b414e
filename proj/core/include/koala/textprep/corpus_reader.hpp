#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "koala/error.hpp"

namespace koala::textprep {

// A unit of corpus text before normalization.
struct RawDocument {
  std::string doc_id;
  std::string text;  // valid UTF-8
  std::string corpus_id;
};

enum class InputFormat {
  kJsonLines,  // {"doc_id": ..., "text": ...} per line
  kPlainText,  // blank-line separated blocks, synthetic ids
};

// Malformed input. line() is 1-based; 0 when no line applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using DocumentSink = std::function<void(RawDocument&&)>;

// Streams documents to `sink` in input order. Text is passed through
// repair_utf8. Throws ParseError on malformed JSON, missing fields, or a
// doc_id repeated within the corpus.
void read_documents(std::istream& in, InputFormat format,
                    const std::string& corpus_id, const DocumentSink& sink);

std::vector<RawDocument> read_documents(std::istream& in, InputFormat format,
                                        const std::string& corpus_id);

// Synthetic id for the n-th (0-based) plain-text block. Zero padded so that
// lexicographic order matches input order.
std::string synthetic_doc_id(std::size_t index);

}  // namespace koala::textprep
