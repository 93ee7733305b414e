#pragma once

#include <random>
#include <string>
#include <vector>

#include "koala/csa/encoded_corpus.hpp"
#include "koala/textprep/tokenize.hpp"

namespace bench {

// Zipf-distributed tokens "w<k>" cut into documents of 50..2000 tokens.
inline std::vector<koala::textprep::TokenSequence> zipf_docs(std::size_t tokens,
                                                             std::size_t vocab,
                                                             std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<double> w(vocab);
  for (std::size_t k = 0; k < vocab; ++k) w[k] = 1.0 / static_cast<double>(k + 1);
  std::discrete_distribution<std::size_t> zipf(w.begin(), w.end());
  std::uniform_int_distribution<std::size_t> len(50, 2000);
  std::vector<koala::textprep::TokenSequence> docs;
  std::size_t used = 0;
  while (used < tokens) {
    koala::textprep::TokenSequence d;
    d.doc_id = "d" + std::to_string(docs.size());
    const auto n = std::min(len(rng), tokens - used);
    for (std::size_t i = 0; i < n; ++i) d.tokens.push_back("w" + std::to_string(zipf(rng)));
    used += n;
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace bench
