#include "fixtures.hpp"

#include <string>

namespace tridiff::fixtures {

TripartiteDataset tagged(const std::vector<Edge>& user_object, std::size_t users,
                         std::size_t objects, const std::vector<Edge>& user_tag,
                         std::size_t tags) {
  const auto ids = [](char prefix, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i + 1));
    return EntityIndexMap(std::move(out));
  };
  return TripartiteDataset(ids('u', users), ids('o', objects), ids('t', tags),
                           BipartiteGraph::build(user_object, users, objects),
                           BipartiteGraph::build(user_tag, users, tags));
}

EvaluationSplit third_of_hundred() {
  const std::vector<Edge> training = {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 1},
                                      {2, 1}, {3, 1}, {1, 2}, {2, 2}, {1, 3}};
  const std::vector<Edge> tags = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  EvaluationSplit split;
  split.training = tagged(training, 4, 101, tags, 1);
  split.test_edges = {{0, 3}};
  return split;
}

}  // namespace tridiff::fixtures
