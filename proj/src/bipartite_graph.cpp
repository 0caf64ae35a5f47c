#include "tridiff/bipartite_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tridiff {

namespace {

void fill_offsets(std::vector<std::size_t>& offsets) {
  for (std::size_t i = 1; i < offsets.size(); ++i) {
    offsets[i] += offsets[i - 1];
  }
}

}  // namespace

BipartiteGraph BipartiteGraph::build(std::span<const Edge> edges, std::size_t left_count,
                                     std::size_t right_count) {
  for (const auto& [u, x] : edges) {
    if (u >= left_count || x >= right_count) {
      throw std::out_of_range("edge (" + std::to_string(u) + ", " + std::to_string(x) +
                              ") outside " + std::to_string(left_count) + "x" +
                              std::to_string(right_count));
    }
  }

  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  BipartiteGraph g;
  g.left_offsets_.assign(left_count + 1, 0);
  g.right_offsets_.assign(right_count + 1, 0);
  g.left_adj_.reserve(sorted.size());
  for (const auto& [u, x] : sorted) {
    ++g.left_offsets_[u + 1];
    ++g.right_offsets_[x + 1];
    g.left_adj_.push_back(x);
  }
  fill_offsets(g.left_offsets_);
  fill_offsets(g.right_offsets_);

  // Edges are sorted by left index, so each right list is filled in
  // increasing order.
  g.right_adj_.resize(sorted.size());
  std::vector<std::size_t> cursor(g.right_offsets_.begin(), g.right_offsets_.end() - 1);
  for (const auto& [u, x] : sorted) {
    g.right_adj_[cursor[x]++] = u;
  }
  return g;
}

std::size_t BipartiteGraph::left_degree_at(Index u) const {
  if (u >= left_count()) {
    throw std::out_of_range("left index " + std::to_string(u) + " out of range");
  }
  return left_degree(u);
}

std::size_t BipartiteGraph::right_degree_at(Index x) const {
  if (x >= right_count()) {
    throw std::out_of_range("right index " + std::to_string(x) + " out of range");
  }
  return right_degree(x);
}

bool BipartiteGraph::has_edge(Index u, Index x) const {
  if (u >= left_count()) return false;
  auto nb = left_neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), x);
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Index u = 0; u < left_count(); ++u) {
    for (Index x : left_neighbors(u)) out.emplace_back(u, x);
  }
  return out;
}

std::vector<Edge> BipartiteGraph::edges_from_right() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Index x = 0; x < right_count(); ++x) {
    for (Index u : right_neighbors(x)) out.emplace_back(u, x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tridiff
