#include "koala/csa/bit_vector.hpp"

#include "koala/error.hpp"

namespace koala::csa {

RankBitVector::RankBitVector(std::vector<std::uint64_t> words,
                             std::uint64_t size)
    : words_(std::move(words)), size_(size) {
  // One spare word lets rank1(size()) read words_[size / 64] when size is a
  // multiple of 64.
  const std::uint64_t needed = size_ / kWordBits + 1;
  if (words_.size() > needed) {
    throw InvalidArgument("bitvector has more words than its size requires");
  }
  words_.resize(needed, 0);
  if (const auto tail = size_ % kWordBits) {
    words_.back() &= (std::uint64_t{1} << tail) - 1;
  } else {
    words_.back() = 0;
  }

  const std::uint64_t num_blocks = words_.size() / kWordsPerBlock + 1;
  blocks_.assign(num_blocks + 1, 0);
  std::uint64_t total = 0;
  for (std::uint64_t w = 0; w < words_.size(); ++w) {
    if (w % kWordsPerBlock == 0) blocks_[w / kWordsPerBlock] = total;
    total += static_cast<std::uint64_t>(std::popcount(words_[w]));
  }
  for (std::uint64_t b = (words_.size() + kWordsPerBlock - 1) / kWordsPerBlock;
       b < blocks_.size(); ++b) {
    blocks_[b] = total;
  }
}

}  // namespace koala::csa
