#include "koala/csa/vocabulary.hpp"

#include <limits>

#include "koala/error.hpp"

namespace koala::csa {

Symbol Vocabulary::intern(std::string_view token) {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  if (alphabet_size() >= std::numeric_limits<Symbol>::max()) {
    throw Error("vocabulary overflow");
  }
  const auto symbol = static_cast<Symbol>(alphabet_size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), symbol);
  return symbol;
}

std::optional<Symbol> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(token); it != ids_.end()) return it->second;
  return std::nullopt;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.ids_.reserve(v.tokens_.size());
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    const auto symbol = static_cast<Symbol>(i + kFirstTokenSymbol);
    if (v.tokens_[i].empty() || !v.ids_.emplace(v.tokens_[i], symbol).second) {
      throw InvalidArgument("vocabulary tokens must be non-empty and distinct");
    }
  }
  return v;
}

std::size_t Vocabulary::size_in_bytes() const {
  std::size_t bytes = 0;
  for (const auto& t : tokens_) bytes += t.size() + sizeof(std::uint32_t);
  return bytes;
}

}  // namespace koala::csa
