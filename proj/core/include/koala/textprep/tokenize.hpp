#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace koala::textprep {

// Ordered word-level tokens of one document or query. Tokens are never empty
// and never contain whitespace or non-printing characters.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::string doc_id;

  bool operator==(const TokenSequence&) const = default;
};

// ASCII punctuation that is split off the edges of a word.
bool is_edge_punctuation(char c);

// Splits normalized text on whitespace, then peels leading and trailing
// punctuation off each word as one-character tokens. Punctuation inside a
// word ("state-of-the-art", "don't", "3.14") stays attached.
TokenSequence tokenize(std::string_view normalized, std::string doc_id = {});

// repair_utf8 -> normalize_text -> tokenize. This is the single entry point
// used for both corpus documents and queries.
TokenSequence prepare(std::string_view raw, std::string doc_id = {});

// Tokens joined by single spaces.
std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace koala::textprep
