#include "koala/csa/wavelet_matrix.hpp"

#include <bit>

#include "koala/error.hpp"

namespace koala::csa {

unsigned WaveletMatrix::bits_for_alphabet(std::size_t alphabet_size) {
  if (alphabet_size <= 2) return 1;
  return static_cast<unsigned>(std::bit_width(alphabet_size - 1));
}

WaveletMatrix::WaveletMatrix(std::span<const Symbol> sequence,
                             unsigned bits_per_symbol)
    : size_(sequence.size()) {
  if (bits_per_symbol == 0 || bits_per_symbol > 32) {
    throw InvalidArgument("bits_per_symbol must be in [1, 32]");
  }
  std::vector<Symbol> current(sequence.begin(), sequence.end());
  std::vector<Symbol> next(current.size());
  levels_.reserve(bits_per_symbol);
  zeros_.reserve(bits_per_symbol);

  for (unsigned level = 0; level < bits_per_symbol; ++level) {
    const unsigned shift = bits_per_symbol - 1 - level;
    std::vector<std::uint64_t> words(size_ / RankBitVector::kWordBits + 1, 0);
    std::uint64_t zeros = 0;
    for (std::uint64_t i = 0; i < size_; ++i) {
      if ((current[i] >> shift) & 1U) {
        words[i / RankBitVector::kWordBits] |= std::uint64_t{1}
                                               << (i % RankBitVector::kWordBits);
      } else {
        ++zeros;
      }
    }
    std::uint64_t z = 0;
    std::uint64_t o = zeros;
    for (std::uint64_t i = 0; i < size_; ++i) {
      if ((current[i] >> shift) & 1U) {
        next[o++] = current[i];
      } else {
        next[z++] = current[i];
      }
    }
    current.swap(next);
    levels_.emplace_back(std::move(words), size_);
    zeros_.push_back(zeros);
  }
}

WaveletMatrix::WaveletMatrix(std::vector<RankBitVector> levels,
                             std::uint64_t size)
    : levels_(std::move(levels)), size_(size) {
  if (levels_.empty() || levels_.size() > 32) {
    throw InvalidArgument("wavelet matrix needs between 1 and 32 levels");
  }
  zeros_.reserve(levels_.size());
  for (const auto& bv : levels_) {
    if (bv.size() != size_) {
      throw InvalidArgument("wavelet matrix level length mismatch");
    }
    zeros_.push_back(size_ - bv.ones());
  }
}

Symbol WaveletMatrix::access(std::uint64_t i) const {
  Symbol c = 0;
  for (std::size_t level = 0; level < levels_.size(); ++level) {
    const auto& bv = levels_[level];
    const bool bit = bv[i];
    c = static_cast<Symbol>((c << 1) | static_cast<Symbol>(bit));
    i = bit ? zeros_[level] + bv.rank1(i) : bv.rank0(i);
  }
  return c;
}

std::uint64_t WaveletMatrix::rank(Symbol c, std::uint64_t i) const {
  const auto [lo, hi] = rank_pair(c, 0, i);
  return hi - lo;
}

std::pair<std::uint64_t, std::uint64_t> WaveletMatrix::rank_pair(
    Symbol c, std::uint64_t lo, std::uint64_t hi) const {
  const auto n = levels_.size();
  if (n < 32 && (c >> n) != 0) return {0, 0};
  // `start` follows position 0 down the path of c; at the last level the
  // occurrences of c form one run beginning there.
  std::uint64_t start = 0;
  for (std::size_t level = 0; level < n; ++level) {
    const auto& bv = levels_[level];
    if ((c >> (n - 1 - level)) & 1U) {
      start = zeros_[level] + bv.rank1(start);
      lo = zeros_[level] + bv.rank1(lo);
      hi = zeros_[level] + bv.rank1(hi);
    } else {
      start = bv.rank0(start);
      lo = bv.rank0(lo);
      hi = bv.rank0(hi);
    }
  }
  return {lo - start, hi - start};
}

std::size_t WaveletMatrix::size_in_bytes() const {
  std::size_t bytes = zeros_.size() * sizeof(std::uint64_t);
  for (const auto& bv : levels_) bytes += bv.size_in_bytes();
  return bytes;
}

}  // namespace koala::csa
