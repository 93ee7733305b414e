#include "koala/textprep/tokenize.hpp"

#include <cstring>

#include "koala/textprep/normalize.hpp"

namespace koala::textprep {
namespace {

bool is_separator(char c) {
  return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\v' ||
         c == '\f';
}

void split_word(std::string_view word, std::vector<std::string>& out) {
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && is_edge_punctuation(word[begin])) {
    out.emplace_back(1, word[begin]);
    ++begin;
  }
  std::size_t tail = end;
  while (tail > begin && is_edge_punctuation(word[tail - 1])) --tail;
  if (tail > begin) out.emplace_back(word.substr(begin, tail - begin));
  for (std::size_t i = tail; i < end; ++i) out.emplace_back(1, word[i]);
}

}  // namespace

bool is_edge_punctuation(char c) {
  return c != '\0' && std::strchr("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~", c);
}

TokenSequence tokenize(std::string_view normalized, std::string doc_id) {
  TokenSequence seq;
  seq.doc_id = std::move(doc_id);
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && is_separator(normalized[pos])) ++pos;
    std::size_t end = pos;
    while (end < normalized.size() && !is_separator(normalized[end])) ++end;
    if (end > pos) split_word(normalized.substr(pos, end - pos), seq.tokens);
    pos = end;
  }
  return seq;
}

TokenSequence prepare(std::string_view raw, std::string doc_id) {
  return tokenize(normalize_text(raw), std::move(doc_id));
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace koala::textprep
