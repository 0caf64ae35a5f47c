#pragma once

#include <cstddef>

#include "tridiff/bipartite_graph.hpp"
#include "tridiff/entity_index.hpp"

namespace tridiff {

// Users, objects and tags plus the two bipartite graphs that share the user
// index: user-object (collections) and user-tag (tag usage).
class TripartiteDataset {
 public:
  TripartiteDataset() = default;
  // Throws std::invalid_argument when graph sizes disagree with the index maps.
  TripartiteDataset(EntityIndexMap users, EntityIndexMap objects, EntityIndexMap tags,
                    BipartiteGraph user_object, BipartiteGraph user_tag);

  const EntityIndexMap& users() const { return users_; }
  const EntityIndexMap& objects() const { return objects_; }
  const EntityIndexMap& tags() const { return tags_; }
  const BipartiteGraph& user_object() const { return user_object_; }
  const BipartiteGraph& user_tag() const { return user_tag_; }

  std::size_t user_count() const { return users_.size(); }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t tag_count() const { return tags_.size(); }
  bool empty() const { return users_.empty(); }

  // Same index maps and tag graph, different user-object graph.
  TripartiteDataset with_user_object(BipartiteGraph user_object) const;

  friend bool operator==(const TripartiteDataset&, const TripartiteDataset&) = default;

 private:
  EntityIndexMap users_;
  EntityIndexMap objects_;
  EntityIndexMap tags_;
  BipartiteGraph user_object_;
  BipartiteGraph user_tag_;
};

// k(u) in the user-object graph. Throws std::out_of_range for u >= m.
std::size_t degree_user_object(const TripartiteDataset& dataset, Index u);
// k'(u) in the user-tag graph. Throws std::out_of_range for u >= m.
std::size_t degree_user_tag(const TripartiteDataset& dataset, Index u);

}  // namespace tridiff
