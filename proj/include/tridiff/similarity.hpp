#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tridiff/bipartite_graph.hpp"

namespace tridiff {

enum class Measure { Diffusion, Cosine, Jaccard };
enum class Channel { Object, Tag };

enum class SimilarityKind {
  DiffusionObject,
  DiffusionTag,
  CosineObject,
  CosineTag,
  JaccardObject,
  JaccardTag,
  Fused,
};

SimilarityKind kind_of(Measure measure, Channel channel);
std::string_view to_string(Measure measure);
std::string_view to_string(SimilarityKind kind);
// Accepts "diffusion", "cosine", "jaccard"; throws std::invalid_argument.
Measure parse_measure(std::string_view name);

// Similarities of every user u toward one target v. Entries are sorted by u
// and hold strictly positive scores; an absent u means 0. The self-entry
// (u == v) is kept.
struct SimilarityRow {
  using Entry = std::pair<Index, double>;

  Index target = 0;
  SimilarityKind kind = SimilarityKind::DiffusionObject;
  std::optional<Measure> measure;  // measure the row (or both fused inputs) came from
  std::optional<double> lambda;    // set only for fused rows
  std::vector<Entry> entries;

  double score(Index u) const;
  double total() const;
  bool empty() const { return entries.empty(); }
};

// Resource held by each right node after the target spreads one unit evenly
// over its neighbors.
struct ResourceVector {
  Index target = 0;
  std::vector<std::pair<Index, double>> amounts;  // sorted by right index
};

// Dense scratch buffers reused across rows; one per worker thread.
class SimilarityWorkspace {
 public:
  void reserve(std::size_t left_count);

 private:
  friend class SimilarityKernels;
  std::vector<double> acc_;
  std::vector<std::uint32_t> overlap_;
  std::vector<Index> touched_;
};

// Throws std::out_of_range when v >= left_count.
ResourceVector spread(const BipartiteGraph& graph, Index v);

// Two-step mass diffusion: s_uv = (1/k(v)) * sum_a a_ua a_va / k(a).
// Empty when k(v) == 0.
SimilarityRow diffusion_row(const BipartiteGraph& graph, Index v, Channel channel = Channel::Object);
SimilarityRow diffusion_row(const BipartiteGraph& graph, Index v, Channel channel,
                            SimilarityWorkspace& ws);

// Binary cosine: |G(u) & G(v)| / sqrt(k(u) k(v)).
SimilarityRow cosine_row(const BipartiteGraph& graph, Index v, Channel channel = Channel::Object);
SimilarityRow cosine_row(const BipartiteGraph& graph, Index v, Channel channel,
                         SimilarityWorkspace& ws);

// Jaccard: |G(u) & G(v)| / |G(u) | G(v)|.
SimilarityRow jaccard_row(const BipartiteGraph& graph, Index v, Channel channel = Channel::Object);
SimilarityRow jaccard_row(const BipartiteGraph& graph, Index v, Channel channel,
                          SimilarityWorkspace& ws);

SimilarityRow similarity_row(Measure measure, const BipartiteGraph& graph, Index v,
                             Channel channel, SimilarityWorkspace& ws);

// Pairwise forms via sorted-list merge.
std::size_t overlap(const BipartiteGraph& graph, Index u, Index v);
double cosine(const BipartiteGraph& graph, Index u, Index v);
double jaccard(const BipartiteGraph& graph, Index u, Index v);

// lambda * object_row + (1 - lambda) * tag_row, absent entries as 0, zero
// results dropped. Throws std::invalid_argument on mismatched targets,
// different measures or lambda outside [0, 1].
SimilarityRow fuse(const SimilarityRow& object_row, const SimilarityRow& tag_row, double lambda);

}  // namespace tridiff
