#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tridiff/similarity.hpp"
#include "tridiff/tripartite_dataset.hpp"

namespace tridiff {

// p_va for objects a not collected by v in training; sorted by object index,
// strictly positive scores only.
struct ScoreVector {
  using Entry = std::pair<Index, double>;

  Index target = 0;
  std::vector<Entry> entries;

  double score(Index object) const;
  bool empty() const { return entries.empty(); }
};

struct RecommendationList {
  Index target = 0;
  // Descending score_key, ascending index on equal keys. Scores themselves
  // are exact, so neighbors tied on the key may differ in the last bits.
  std::vector<ScoreVector::Entry> entries;
};

class ScoreWorkspace {
 public:
  void reserve(std::size_t object_count);

 private:
  friend ScoreVector score_objects(const TripartiteDataset&, const SimilarityRow&, ScoreWorkspace&);
  std::vector<double> acc_;
  std::vector<char> collected_;
  std::vector<Index> touched_;
};

// p_va = sum over u != v of row[u] * a_ua, restricted to objects v has not
// collected. Computed as a scatter over the collections of users in the row.
ScoreVector score_objects(const TripartiteDataset& training, const SimilarityRow& row);
ScoreVector score_objects(const TripartiteDataset& training, const SimilarityRow& row,
                          ScoreWorkspace& ws);

// Ordering key for scores: the value rounded to 33 significant bits (about
// 10 decimal digits). Scores that are equal in exact arithmetic but differ by
// summation-order rounding share a key, so they tie in rankings.
double score_key(double score);

// The L best-scoring objects, ordered by score_key then ascending index; shorter when fewer than L scores are positive.
// Throws std::invalid_argument for L == 0.
RecommendationList top_l(const ScoreVector& scores, std::size_t list_length);

}  // namespace tridiff
