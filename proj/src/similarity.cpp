#include "tridiff/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tridiff {

SimilarityKind kind_of(Measure measure, Channel channel) {
  const bool obj = channel == Channel::Object;
  switch (measure) {
    case Measure::Diffusion: return obj ? SimilarityKind::DiffusionObject : SimilarityKind::DiffusionTag;
    case Measure::Cosine: return obj ? SimilarityKind::CosineObject : SimilarityKind::CosineTag;
    case Measure::Jaccard: return obj ? SimilarityKind::JaccardObject : SimilarityKind::JaccardTag;
  }
  throw std::logic_error("unknown measure");
}

std::string_view to_string(Measure measure) {
  switch (measure) {
    case Measure::Diffusion: return "diffusion";
    case Measure::Cosine: return "cosine";
    case Measure::Jaccard: return "jaccard";
  }
  return "?";
}

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::DiffusionObject: return "diffusion-object";
    case SimilarityKind::DiffusionTag: return "diffusion-tag";
    case SimilarityKind::CosineObject: return "cosine-object";
    case SimilarityKind::CosineTag: return "cosine-tag";
    case SimilarityKind::JaccardObject: return "jaccard-object";
    case SimilarityKind::JaccardTag: return "jaccard-tag";
    case SimilarityKind::Fused: return "fused";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  if (name == "diffusion") return Measure::Diffusion;
  if (name == "cosine") return Measure::Cosine;
  if (name == "jaccard") return Measure::Jaccard;
  throw std::invalid_argument("unknown similarity '" + std::string(name) +
                              "' (expected diffusion, cosine or jaccard)");
}

double SimilarityRow::score(Index u) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), u,
                             [](const Entry& e, Index key) { return e.first < key; });
  return it != entries.end() && it->first == u ? it->second : 0.0;
}

double SimilarityRow::total() const {
  double s = 0.0;
  for (const auto& [u, w] : entries) s += w;
  return s;
}

void SimilarityWorkspace::reserve(std::size_t left_count) {
  if (acc_.size() < left_count) {
    acc_.resize(left_count, 0.0);
    overlap_.resize(left_count, 0);
  }
}

namespace {

void check_target(const BipartiteGraph& graph, Index v) {
  if (v >= graph.left_count()) {
    throw std::out_of_range("target user " + std::to_string(v) + " out of range (m = " +
                            std::to_string(graph.left_count()) + ")");
  }
}

SimilarityRow empty_row(Index v, Measure measure, Channel channel) {
  SimilarityRow row;
  row.target = v;
  row.kind = kind_of(measure, channel);
  row.measure = measure;
  return row;
}

}  // namespace

// Scatter kernels over the right-node neighbor lists of v. The workspace
// buffers are all-zero between calls; every touched slot is reset on exit.
class SimilarityKernels {
 public:
  static SimilarityRow diffusion(const BipartiteGraph& g, Index v, Channel channel,
                                 SimilarityWorkspace& ws) {
    check_target(g, v);
    SimilarityRow row = empty_row(v, Measure::Diffusion, channel);
    const auto kv = g.left_degree(v);
    if (kv == 0) return row;
    ws.reserve(g.left_count());
    ws.touched_.clear();
    for (Index a : g.left_neighbors(v)) {
      const auto users = g.right_neighbors(a);
      const double share = 1.0 / static_cast<double>(users.size());
      for (Index u : users) {
        if (ws.acc_[u] == 0.0) ws.touched_.push_back(u);
        ws.acc_[u] += share;
      }
    }
    std::sort(ws.touched_.begin(), ws.touched_.end());
    row.entries.reserve(ws.touched_.size());
    const double kv_real = static_cast<double>(kv);
    for (Index u : ws.touched_) {
      row.entries.emplace_back(u, ws.acc_[u] / kv_real);
      ws.acc_[u] = 0.0;
    }
    return row;
  }

  template <typename Score>
  static SimilarityRow by_overlap(const BipartiteGraph& g, Index v, Measure measure,
                                  Channel channel, SimilarityWorkspace& ws, Score score) {
    check_target(g, v);
    SimilarityRow row = empty_row(v, measure, channel);
    if (g.left_degree(v) == 0) return row;
    ws.reserve(g.left_count());
    ws.touched_.clear();
    for (Index a : g.left_neighbors(v)) {
      for (Index u : g.right_neighbors(a)) {
        if (ws.overlap_[u]++ == 0) ws.touched_.push_back(u);
      }
    }
    std::sort(ws.touched_.begin(), ws.touched_.end());
    row.entries.reserve(ws.touched_.size());
    for (Index u : ws.touched_) {
      row.entries.emplace_back(u, score(ws.overlap_[u], g.left_degree(u), g.left_degree(v)));
      ws.overlap_[u] = 0;
    }
    return row;
  }
};

namespace {

double cosine_score(std::size_t common, std::size_t ku, std::size_t kv) {
  return static_cast<double>(common) / std::sqrt(static_cast<double>(ku) * static_cast<double>(kv));
}

double jaccard_score(std::size_t common, std::size_t ku, std::size_t kv) {
  return static_cast<double>(common) / static_cast<double>(ku + kv - common);
}

}  // namespace

ResourceVector spread(const BipartiteGraph& graph, Index v) {
  check_target(graph, v);
  ResourceVector out;
  out.target = v;
  const auto nb = graph.left_neighbors(v);
  if (nb.empty()) return out;
  const double share = 1.0 / static_cast<double>(nb.size());
  out.amounts.reserve(nb.size());
  for (Index a : nb) out.amounts.emplace_back(a, share);
  return out;
}

SimilarityRow diffusion_row(const BipartiteGraph& graph, Index v, Channel channel) {
  SimilarityWorkspace ws;
  return diffusion_row(graph, v, channel, ws);
}

SimilarityRow diffusion_row(const BipartiteGraph& graph, Index v, Channel channel,
                            SimilarityWorkspace& ws) {
  return SimilarityKernels::diffusion(graph, v, channel, ws);
}

SimilarityRow cosine_row(const BipartiteGraph& graph, Index v, Channel channel) {
  SimilarityWorkspace ws;
  return cosine_row(graph, v, channel, ws);
}

SimilarityRow cosine_row(const BipartiteGraph& graph, Index v, Channel channel,
                         SimilarityWorkspace& ws) {
  return SimilarityKernels::by_overlap(graph, v, Measure::Cosine, channel, ws, cosine_score);
}

SimilarityRow jaccard_row(const BipartiteGraph& graph, Index v, Channel channel) {
  SimilarityWorkspace ws;
  return jaccard_row(graph, v, channel, ws);
}

SimilarityRow jaccard_row(const BipartiteGraph& graph, Index v, Channel channel,
                          SimilarityWorkspace& ws) {
  return SimilarityKernels::by_overlap(graph, v, Measure::Jaccard, channel, ws, jaccard_score);
}

SimilarityRow similarity_row(Measure measure, const BipartiteGraph& graph, Index v,
                             Channel channel, SimilarityWorkspace& ws) {
  switch (measure) {
    case Measure::Diffusion: return diffusion_row(graph, v, channel, ws);
    case Measure::Cosine: return cosine_row(graph, v, channel, ws);
    case Measure::Jaccard: return jaccard_row(graph, v, channel, ws);
  }
  throw std::logic_error("unknown measure");
}

std::size_t overlap(const BipartiteGraph& graph, Index u, Index v) {
  check_target(graph, u);
  check_target(graph, v);
  const auto a = graph.left_neighbors(u);
  const auto b = graph.left_neighbors(v);
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common, ++i, ++j;
    }
  }
  return common;
}

double cosine(const BipartiteGraph& graph, Index u, Index v) {
  const auto common = overlap(graph, u, v);
  return common == 0 ? 0.0 : cosine_score(common, graph.left_degree(u), graph.left_degree(v));
}

double jaccard(const BipartiteGraph& graph, Index u, Index v) {
  const auto common = overlap(graph, u, v);
  return common == 0 ? 0.0 : jaccard_score(common, graph.left_degree(u), graph.left_degree(v));
}

SimilarityRow fuse(const SimilarityRow& object_row, const SimilarityRow& tag_row, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (object_row.target != tag_row.target) {
    throw std::invalid_argument("cannot fuse rows of different targets (" +
                                std::to_string(object_row.target) + " vs " +
                                std::to_string(tag_row.target) + ")");
  }
  if (object_row.measure != tag_row.measure) {
    throw std::invalid_argument("cannot fuse " + std::string(to_string(object_row.kind)) +
                                " with " + std::string(to_string(tag_row.kind)));
  }

  SimilarityRow out;
  out.target = object_row.target;
  out.kind = SimilarityKind::Fused;
  out.measure = object_row.measure;
  out.lambda = lambda;
  out.entries.reserve(object_row.entries.size() + tag_row.entries.size());

  const double mu = 1.0 - lambda;
  const auto emit = [&](Index u, double a, double b) {
    const double s = lambda * a + mu * b;
    if (s > 0.0) out.entries.emplace_back(u, s);
  };
  auto i = object_row.entries.begin();
  auto j = tag_row.entries.begin();
  while (i != object_row.entries.end() || j != tag_row.entries.end()) {
    if (j == tag_row.entries.end() || (i != object_row.entries.end() && i->first < j->first)) {
      emit(i->first, i->second, 0.0);
      ++i;
    } else if (i == object_row.entries.end() || j->first < i->first) {
      emit(j->first, 0.0, j->second);
      ++j;
    } else {
      emit(i->first, i->second, j->second);
      ++i, ++j;
    }
  }
  return out;
}

}  // namespace tridiff
