#include "tridiff/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <stdexcept>
#include <string>

namespace tridiff {

double ScoreVector::score(Index object) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), object,
                             [](const Entry& e, Index key) { return e.first < key; });
  return it != entries.end() && it->first == object ? it->second : 0.0;
}

void ScoreWorkspace::reserve(std::size_t object_count) {
  if (acc_.size() < object_count) {
    acc_.resize(object_count, 0.0);
    collected_.resize(object_count, 0);
  }
}

ScoreVector score_objects(const TripartiteDataset& training, const SimilarityRow& row) {
  ScoreWorkspace ws;
  return score_objects(training, row, ws);
}

ScoreVector score_objects(const TripartiteDataset& training, const SimilarityRow& row,
                          ScoreWorkspace& ws) {
  const auto& graph = training.user_object();
  const Index v = row.target;
  if (v >= graph.left_count()) {
    throw std::out_of_range("target user " + std::to_string(v) + " out of range");
  }
  ScoreVector out;
  out.target = v;
  if (row.empty()) return out;

  ws.reserve(graph.right_count());
  ws.touched_.clear();
  for (Index a : graph.left_neighbors(v)) ws.collected_[a] = 1;

  for (const auto& [u, s] : row.entries) {
    if (u == v) continue;
    for (Index a : graph.left_neighbors(u)) {
      if (ws.acc_[a] == 0.0) ws.touched_.push_back(a);
      ws.acc_[a] += s;
    }
  }

  std::sort(ws.touched_.begin(), ws.touched_.end());
  out.entries.reserve(ws.touched_.size());
  for (Index a : ws.touched_) {
    if (!ws.collected_[a]) out.entries.emplace_back(a, ws.acc_[a]);
    ws.acc_[a] = 0.0;
  }
  for (Index a : graph.left_neighbors(v)) ws.collected_[a] = 0;
  return out;
}

double score_key(double score) {
  if (score == 0.0 || !std::isfinite(score)) return score;
  int exponent = 0;
  const double mantissa = std::frexp(score, &exponent);
  constexpr int kBits = 33;
  return std::ldexp(std::round(std::ldexp(mantissa, kBits)), exponent - kBits);
}

RecommendationList top_l(const ScoreVector& scores, std::size_t list_length) {
  if (list_length == 0) {
    throw std::invalid_argument("recommendation list length must be positive");
  }
  RecommendationList out;
  out.target = scores.target;
  struct Keyed {
    double key;
    ScoreVector::Entry entry;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(scores.entries.size());
  for (const auto& e : scores.entries) keyed.push_back({score_key(e.second), e});
  const auto take = std::min(list_length, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end(),
                    [](const Keyed& a, const Keyed& b) {
                      return std::tie(b.key, a.entry.first) < std::tie(a.key, b.entry.first);
                    });
  out.entries.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.entries.push_back(keyed[i].entry);
  return out;
}

}  // namespace tridiff
