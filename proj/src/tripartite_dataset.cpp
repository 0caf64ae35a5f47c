#include "tridiff/tripartite_dataset.hpp"

#include <stdexcept>
#include <string>

namespace tridiff {

TripartiteDataset::TripartiteDataset(EntityIndexMap users, EntityIndexMap objects,
                                     EntityIndexMap tags, BipartiteGraph user_object,
                                     BipartiteGraph user_tag)
    : users_(std::move(users)),
      objects_(std::move(objects)),
      tags_(std::move(tags)),
      user_object_(std::move(user_object)),
      user_tag_(std::move(user_tag)) {
  if (user_object_.left_count() != users_.size() || user_tag_.left_count() != users_.size()) {
    throw std::invalid_argument("graphs do not share the user index (m = " +
                                std::to_string(users_.size()) + ")");
  }
  if (user_object_.right_count() != objects_.size()) {
    throw std::invalid_argument("user-object graph right side != object count");
  }
  if (user_tag_.right_count() != tags_.size()) {
    throw std::invalid_argument("user-tag graph right side != tag count");
  }
}

TripartiteDataset TripartiteDataset::with_user_object(BipartiteGraph user_object) const {
  return TripartiteDataset(users_, objects_, tags_, std::move(user_object), user_tag_);
}

std::size_t degree_user_object(const TripartiteDataset& dataset, Index u) {
  return dataset.user_object().left_degree_at(u);
}

std::size_t degree_user_tag(const TripartiteDataset& dataset, Index u) {
  return dataset.user_tag().left_degree_at(u);
}

}  // namespace tridiff
