#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "koala/csa/bit_vector.hpp"
#include "koala/csa/vocabulary.hpp"

namespace koala::csa {

// Level-wise wavelet tree (wavelet matrix layout): one bitvector per bit of
// the symbol, most significant first. Each level is stably partitioned by
// the current bit, zeros before ones, so rank costs one pass of
// ceil(log2 sigma) levels.
class WaveletMatrix {
 public:
  WaveletMatrix() = default;
  WaveletMatrix(std::span<const Symbol> sequence, unsigned bits_per_symbol);
  // Reassembles a matrix from its serialized levels.
  WaveletMatrix(std::vector<RankBitVector> levels, std::uint64_t size);

  std::uint64_t size() const { return size_; }
  unsigned levels() const { return static_cast<unsigned>(levels_.size()); }
  const std::vector<RankBitVector>& level_bits() const { return levels_; }

  Symbol access(std::uint64_t i) const;

  // Occurrences of c in [0, i).
  std::uint64_t rank(Symbol c, std::uint64_t i) const;

  // (rank(c, lo), rank(c, hi)) in one descent. Each level costs three
  // bitvector ranks.
  std::pair<std::uint64_t, std::uint64_t> rank_pair(Symbol c, std::uint64_t lo,
                                                    std::uint64_t hi) const;

  std::size_t size_in_bytes() const;

  // Smallest bit width able to represent symbols [0, alphabet_size).
  static unsigned bits_for_alphabet(std::size_t alphabet_size);

 private:
  std::vector<RankBitVector> levels_;
  std::vector<std::uint64_t> zeros_;  // number of 0s per level
  std::uint64_t size_ = 0;
};

}  // namespace koala::csa
