#include "koala/dedup/minhash.hpp"

#include <algorithm>
#include <limits>

namespace koala::dedup {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// FNV-1a over the token bytes, keyed by the seed, then finalized.
std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ splitmix64(seed);
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(h ^ token.size());
}

std::uint64_t permutation_salt(std::uint64_t seed, std::size_t i) {
  return splitmix64(seed ^ splitmix64((i + 1) * kGolden));
}

}  // namespace

ShingleSet make_shingle_set(std::string doc_id,
                            std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return ShingleSet{std::move(doc_id), std::move(tokens)};
}

ShingleSet shingle(const textprep::TokenSequence& doc) {
  return make_shingle_set(doc.doc_id, doc.tokens);
}

std::uint64_t permutation_hash(std::string_view token, std::uint64_t seed,
                               std::size_t permutation) {
  return splitmix64(token_hash(token, seed) ^
                    permutation_salt(seed, permutation));
}

MinHashSignature minhash_signature(const ShingleSet& s, std::uint64_t seed,
                                   std::size_t permutations) {
  if (permutations == 0) throw InvalidArgument("permutations must be >= 1");
  MinHashSignature sig;
  sig.doc_id = s.doc_id;
  sig.permutation_seed = seed;
  sig.values.assign(permutations, std::numeric_limits<std::uint64_t>::max());
  sig.empty_set = s.empty();

  std::vector<std::uint64_t> salts(permutations);
  for (std::size_t i = 0; i < permutations; ++i) {
    salts[i] = permutation_salt(seed, i);
  }
  for (const auto& token : s.shingles) {
    const std::uint64_t base = token_hash(token, seed);
    for (std::size_t i = 0; i < permutations; ++i) {
      sig.values[i] = std::min(sig.values[i], splitmix64(base ^ salts[i]));
    }
  }
  return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.permutation_seed != b.permutation_seed) {
    throw IncomparableSignatures("signatures use different permutation seeds");
  }
  if (a.values.size() != b.values.size() || a.values.empty()) {
    throw IncomparableSignatures("signature lengths differ");
  }
  if (a.empty_set || b.empty_set) return a.empty_set == b.empty_set ? 1.0 : 0.0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    agree += a.values[i] == b.values[i];
  }
  return static_cast<double>(agree) / static_cast<double>(a.values.size());
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto i = a.shingles.begin();
  auto j = b.shingles.begin();
  while (i != a.shingles.end() && j != b.shingles.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++inter, ++i, ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace koala::dedup
