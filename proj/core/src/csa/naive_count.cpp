#include "koala/csa/naive_count.hpp"

#include <algorithm>

#include "koala/error.hpp"

namespace koala::csa {

std::uint64_t naive_count(std::span<const textprep::TokenSequence> docs,
                          std::span<const std::string> pattern) {
  if (pattern.empty()) throw InvalidArgument("naive_count: empty pattern");
  std::uint64_t total = 0;
  for (const auto& doc : docs) {
    const auto& t = doc.tokens;
    if (t.size() < pattern.size()) continue;
    for (std::size_t i = 0; i + pattern.size() <= t.size(); ++i) {
      total += std::equal(pattern.begin(), pattern.end(), t.begin() + i);
    }
  }
  return total;
}

}  // namespace koala::csa
