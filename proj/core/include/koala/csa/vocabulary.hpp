#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace koala::csa {

// Integer symbol of the indexed alphabet.
using Symbol = std::uint32_t;

inline constexpr Symbol kTerminator = 0;
inline constexpr Symbol kSeparator = 1;
inline constexpr Symbol kFirstTokenSymbol = 2;

// Token <-> symbol mapping. Symbols are assigned densely from
// kFirstTokenSymbol in first-occurrence order. The two reserved symbols never
// map to a token.
class Vocabulary {
 public:
  // Returns the symbol of `token`, assigning the next free one if new.
  Symbol intern(std::string_view token);

  std::optional<Symbol> find(std::string_view token) const;

  // Token for a non-reserved symbol. Precondition: contains(symbol).
  const std::string& token(Symbol symbol) const {
    return tokens_[symbol - kFirstTokenSymbol];
  }
  bool contains(Symbol symbol) const {
    return symbol >= kFirstTokenSymbol && symbol < alphabet_size();
  }

  // Number of real tokens.
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  // Number of symbols including the two reserved ones.
  std::size_t alphabet_size() const { return tokens_.size() + kFirstTokenSymbol; }

  // Tokens in symbol order (tokens()[0] has symbol kFirstTokenSymbol).
  const std::vector<std::string>& tokens() const { return tokens_; }

  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size_in_bytes() const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Symbol, Hash, std::equal_to<>> ids_;
};

}  // namespace koala::csa
