#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace koala::csa {

// Plain bitvector with constant-time rank. One cumulative count is stored
// per 512-bit block; rank adds at most eight popcounts within the block.
class RankBitVector {
 public:
  static constexpr std::size_t kWordBits = 64;
  static constexpr std::size_t kWordsPerBlock = 8;

  RankBitVector() = default;
  RankBitVector(std::vector<std::uint64_t> words, std::uint64_t size);

  std::uint64_t size() const { return size_; }

  bool operator[](std::uint64_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }

  // Number of 1s in [0, i). Precondition: i <= size().
  std::uint64_t rank1(std::uint64_t i) const {
    const std::uint64_t word = i / kWordBits;
    const std::uint64_t block = word / kWordsPerBlock;
    std::uint64_t r = blocks_[block];
    for (std::uint64_t w = block * kWordsPerBlock; w < word; ++w) {
      r += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    if (const auto bit = i % kWordBits) {
      r += static_cast<std::uint64_t>(
          std::popcount(words_[word] & ((std::uint64_t{1} << bit) - 1)));
    }
    return r;
  }
  std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }

  std::uint64_t ones() const { return blocks_.back(); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t size_in_bytes() const {
    return (words_.size() + blocks_.size()) * sizeof(std::uint64_t);
  }

 private:
  std::vector<std::uint64_t> words_;   // size_ bits plus one spare word
  std::vector<std::uint64_t> blocks_;  // 1s before each block, plus total
  std::uint64_t size_ = 0;
};

}  // namespace koala::csa
