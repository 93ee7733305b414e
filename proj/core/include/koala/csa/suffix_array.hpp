#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "koala/csa/vocabulary.hpp"
#include "koala/error.hpp"

namespace koala::csa {

// Thrown when a text cannot be indexed (no unique trailing terminator, or
// too long for 32-bit positions).
class BuildError : public Error {
 public:
  using Error::Error;
};

// Starting positions of the suffixes of a text in ascending lexicographic
// order over symbol ids.
using SuffixArray = std::vector<std::int32_t>;

// The text must end with kTerminator and contain it nowhere else; that makes
// the suffix order strict. Linear-time induced sorting.
SuffixArray build_suffix_array(std::span<const Symbol> text);

// bwt[i] = text[(sa[i] - 1) mod |text|].
std::vector<Symbol> bwt_from_sa(std::span<const Symbol> text,
                                std::span<const std::int32_t> sa);

// Throws BuildError unless `text` ends with the only kTerminator.
void check_terminated(std::span<const Symbol> text);

}  // namespace koala::csa
