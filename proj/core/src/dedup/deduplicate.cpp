#include "koala/dedup/deduplicate.hpp"

#include <algorithm>
#include <optional>
#include <thread>

namespace koala::dedup {
namespace {

// Visits documents in ascending index (= doc_id) order. A document is
// removed by its smallest retained LSH neighbour with exact Jaccard at or
// above the threshold.
DedupResult sweep(const std::vector<DocumentSketch>& sk, const LshConfig& cfg) {
  std::vector<MinHashSignature> sigs;
  sigs.reserve(sk.size());
  for (const auto& s : sk) sigs.push_back(s.signature);
  const auto neighbors = lsh_neighbors(sigs, cfg);

  std::vector<bool> retained(sk.size(), false);
  DedupResult result;
  for (std::size_t i = 0; i < sk.size(); ++i) {
    std::optional<Removal> removal;
    for (std::size_t j : neighbors[i]) {
      if (j >= i) break;
      if (!retained[j]) continue;
      const double jac = exact_jaccard(sk[i].shingles, sk[j].shingles);
      if (jac >= cfg.jaccard_threshold) {
        removal = Removal{sk[i].shingles.doc_id, sk[j].shingles.doc_id, jac};
        break;
      }
    }
    if (removal) {
      result.removed.push_back(std::move(*removal));
    } else {
      retained[i] = true;
      result.retained.push_back(sk[i].shingles.doc_id);
    }
  }
  return result;
}

void sort_and_check_unique(std::vector<DocumentSketch>& sketches) {
  std::sort(sketches.begin(), sketches.end(),
            [](const DocumentSketch& a, const DocumentSketch& b) {
              return a.shingles.doc_id < b.shingles.doc_id;
            });
  for (std::size_t i = 1; i < sketches.size(); ++i) {
    if (sketches[i].shingles.doc_id == sketches[i - 1].shingles.doc_id) {
      throw InvalidArgument("duplicate doc_id " + sketches[i].shingles.doc_id);
    }
  }
}

}  // namespace

std::vector<DocumentSketch> sketch_documents(
    std::span<const textprep::TokenSequence> docs, const DedupParams& params) {
  std::vector<DocumentSketch> out(docs.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i].shingles = shingle(docs[i]);
      out[i].signature =
          minhash_signature(out[i].shingles, params.seed, params.permutations);
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(params.threads, 1, std::max<std::size_t>(1, docs.size()));
  if (workers == 1) {
    work(0, docs.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (docs.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(docs.size(), begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  pool.clear();  // join
  return out;
}

DedupBatch deduplicate_batch(std::span<const textprep::TokenSequence> docs,
                             const DedupParams& params) {
  params.validate();
  DedupBatch batch;
  batch.params = params;
  batch.sketches = sketch_documents(docs, params);
  sort_and_check_unique(batch.sketches);

  batch.result = sweep(batch.sketches, params.lsh);
  return batch;
}

DedupBatch merge_deduplicated(DedupBatch a, DedupBatch b) {
  if (!a.params.compatible_with(b.params)) {
    throw InvalidArgument("cannot merge batches built with different seed or config");
  }
  DedupBatch merged;
  merged.params = a.params;
  merged.params.threads = std::max(a.params.threads, b.params.threads);
  merged.sketches = std::move(a.sketches);
  merged.sketches.insert(merged.sketches.end(),
                         std::make_move_iterator(b.sketches.begin()),
                         std::make_move_iterator(b.sketches.end()));
  sort_and_check_unique(merged.sketches);

  // The expensive part (shingling and signatures) is reused; the sweep
  // itself is repeated over the union so that every removal names the same
  // kept document a single pass would.
  merged.result = sweep(merged.sketches, merged.params.lsh);
  return merged;
}

}  // namespace koala::dedup
