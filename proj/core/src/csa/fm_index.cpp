#include "koala/csa/fm_index.hpp"

#include <chrono>

#include "koala/csa/suffix_array.hpp"
#include "koala/error.hpp"

namespace koala::csa {

FmIndex::FmIndex(IndexMetadata metadata, Vocabulary vocabulary,
                 std::vector<std::uint64_t> c_table, WaveletMatrix bwt)
    : metadata_(std::move(metadata)),
      vocabulary_(std::move(vocabulary)),
      c_table_(std::move(c_table)),
      bwt_(std::move(bwt)) {
  if (c_table_.size() != vocabulary_.alphabet_size() + 1) {
    throw InvalidArgument("c_table size does not match the alphabet");
  }
  if (c_table_.front() != 0 || c_table_.back() != bwt_.size()) {
    throw InvalidArgument("c_table bounds do not match the text length");
  }
  for (std::size_t c = 1; c < c_table_.size(); ++c) {
    if (c_table_[c] < c_table_[c - 1]) {
      throw InvalidArgument("c_table must be non-decreasing");
    }
  }
}

FmIndex FmIndex::build(const EncodedCorpus& corpus, const BuildOptions& opts) {
  const std::span<const Symbol> text(corpus.symbols);
  const std::size_t sigma = corpus.vocabulary.alphabet_size();
  for (Symbol s : text) {
    if (s >= sigma) throw BuildError("symbol outside the vocabulary");
  }

  std::vector<std::uint64_t> c_table(sigma + 1, 0);
  for (Symbol s : text) ++c_table[s + 1];
  for (std::size_t c = 1; c <= sigma; ++c) c_table[c] += c_table[c - 1];

  // The suffix array buffer is turned into the BWT in place.
  SuffixArray sa = build_suffix_array(text);
  const std::size_t n = text.size();
  for (auto& v : sa) {
    v = static_cast<std::int32_t>(text[(static_cast<std::size_t>(v) + n - 1) % n]);
  }
  const std::span<const Symbol> bwt(reinterpret_cast<const Symbol*>(sa.data()),
                                    sa.size());
  WaveletMatrix wm(bwt, WaveletMatrix::bits_for_alphabet(sigma));
  sa = {};

  IndexMetadata meta;
  meta.corpus_id = opts.corpus_id;
  meta.doc_count = corpus.doc_count();
  meta.token_count = corpus.token_count();
  meta.build_timestamp =
      opts.build_timestamp.value_or(std::chrono::duration_cast<std::chrono::seconds>(
                                        std::chrono::system_clock::now().time_since_epoch())
                                        .count());
  return FmIndex(std::move(meta), corpus.vocabulary, std::move(c_table),
                 std::move(wm));
}

CountRange FmIndex::extend_left(CountRange range, Symbol c,
                                SearchStats* stats) const {
  const std::uint64_t base = c_table_[c];
  const auto [lo, hi] = bwt_.rank_pair(c, range.lo, range.hi);
  if (stats) {
    ++stats->steps;
    ++stats->c_table_lookups;
    stats->rank_queries += 2;
    stats->bitvector_ranks += 3ULL * bwt_.levels();
  }
  return {base + lo, base + hi};
}

std::optional<std::vector<Symbol>> FmIndex::encode_pattern(
    std::span<const std::string> pattern) const {
  std::vector<Symbol> symbols;
  symbols.reserve(pattern.size());
  for (const auto& token : pattern) {
    auto s = vocabulary_.find(token);
    if (!s) return std::nullopt;
    symbols.push_back(*s);
  }
  return symbols;
}

std::uint64_t FmIndex::count(std::span<const std::string> pattern,
                             SearchStats* stats) const {
  if (pattern.empty()) throw InvalidArgument("count: empty pattern");
  const auto symbols = encode_pattern(pattern);
  if (!symbols) return 0;
  return count_symbols(*symbols, stats);
}

std::uint64_t FmIndex::count_symbols(std::span<const Symbol> pattern,
                                     SearchStats* stats) const {
  if (pattern.empty()) throw InvalidArgument("count: empty pattern");
  for (Symbol s : pattern) {
    if (!vocabulary_.contains(s)) return 0;
  }
  CountRange range = full_range();
  for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
    range = extend_left(range, *it, stats);
  }
  return range.count();
}

std::vector<Symbol> FmIndex::reconstruct_text() const {
  const std::uint64_t n = text_length();
  std::vector<Symbol> text(n);
  if (n == 0) return text;
  text[n - 1] = kTerminator;
  // Row 0 is the suffix consisting of the terminator alone.
  std::uint64_t row = 0;
  for (std::uint64_t k = n - 1; k-- > 0;) {
    const Symbol c = bwt_.access(row);
    text[k] = c;
    row = c_table_[c] + bwt_.rank(c, row);
  }
  return text;
}

std::size_t FmIndex::size_in_bytes() const {
  return bwt_.size_in_bytes() + c_table_.size() * sizeof(std::uint64_t) +
         vocabulary_.size_in_bytes() + metadata_.corpus_id.size();
}

}  // namespace koala::csa
