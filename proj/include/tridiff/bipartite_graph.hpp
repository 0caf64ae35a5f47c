#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tridiff/types.hpp"

namespace tridiff {

// Binary bipartite adjacency (user side on the left) stored as two CSR
// arrays, one per direction. Neighbor lists are strictly increasing.
// Immutable after construction.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Duplicate pairs collapse to a single edge. Throws std::out_of_range when
  // an endpoint is outside [0, left_count) x [0, right_count).
  static BipartiteGraph build(std::span<const Edge> edges, std::size_t left_count,
                              std::size_t right_count);

  std::size_t left_count() const { return left_offsets_.empty() ? 0 : left_offsets_.size() - 1; }
  std::size_t right_count() const { return right_offsets_.empty() ? 0 : right_offsets_.size() - 1; }
  std::size_t edge_count() const { return left_adj_.size(); }

  // Unchecked accessors for the hot path.
  std::span<const Index> left_neighbors(Index u) const {
    return {left_adj_.data() + left_offsets_[u], left_adj_.data() + left_offsets_[u + 1]};
  }
  std::span<const Index> right_neighbors(Index x) const {
    return {right_adj_.data() + right_offsets_[x], right_adj_.data() + right_offsets_[x + 1]};
  }
  std::size_t left_degree(Index u) const { return left_offsets_[u + 1] - left_offsets_[u]; }
  std::size_t right_degree(Index x) const { return right_offsets_[x + 1] - right_offsets_[x]; }

  // Bounds-checked degree accessors; throw std::out_of_range.
  std::size_t left_degree_at(Index u) const;
  std::size_t right_degree_at(Index x) const;

  bool has_edge(Index u, Index x) const;

  // Edges in (left, right) lexicographic order, enumerated from each side.
  std::vector<Edge> edges() const;
  std::vector<Edge> edges_from_right() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::vector<std::size_t> left_offsets_;
  std::vector<Index> left_adj_;
  std::vector<std::size_t> right_offsets_;
  std::vector<Index> right_adj_;
};

}  // namespace tridiff
