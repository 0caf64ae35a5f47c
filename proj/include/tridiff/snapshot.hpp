#pragma once

#include <cstddef>
#include <istream>
#include <ostream>

#include "tridiff/tripartite_dataset.hpp"

namespace tridiff {

struct DatasetSummary {
  std::size_t users = 0;
  std::size_t objects = 0;
  std::size_t tags = 0;
  std::size_t user_object_edges = 0;
  std::size_t user_tag_edges = 0;

  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

DatasetSummary dataset_summary(const TripartiteDataset& dataset);

// Line-oriented text snapshot:
//
//   tridiff-snapshot 1
//   users <m>          followed by m external ids, one per line
//   objects <n>        ...
//   tags <r>           ...
//   user_object <E>    followed by E lines "<user index>\t<object index>"
//   user_tag <E'>      ...
void write_snapshot(std::ostream& out, const TripartiteDataset& dataset);

// Throws std::runtime_error naming the offending line on malformed input.
TripartiteDataset read_snapshot(std::istream& in);

}  // namespace tridiff
