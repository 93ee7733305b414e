#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "koala/textprep/tokenize.hpp"

namespace koala::csa {

// Sliding-window exact-match count summed over documents (overlapping
// windows included). Reference implementation for FmIndex::count.
std::uint64_t naive_count(std::span<const textprep::TokenSequence> docs,
                          std::span<const std::string> pattern);

}  // namespace koala::csa
