#include "tridiff/entity_index.hpp"

#include <stdexcept>

namespace tridiff {

EntityIndexMap::EntityIndexMap(std::vector<std::string> external_ids) {
  ids_.reserve(external_ids.size());
  for (auto& id : external_ids) {
    if (index_of_.contains(id)) {
      throw std::invalid_argument("duplicate external id: " + id);
    }
    intern(id);
  }
}

Index EntityIndexMap::intern(std::string_view id) {
  if (auto it = index_of_.find(id); it != index_of_.end()) {
    return it->second;
  }
  const auto idx = static_cast<Index>(ids_.size());
  ids_.emplace_back(id);
  index_of_.emplace(ids_.back(), idx);
  return idx;
}

std::optional<Index> EntityIndexMap::find(std::string_view id) const {
  if (auto it = index_of_.find(id); it != index_of_.end()) {
    return it->second;
  }
  return std::nullopt;
}

const std::string& EntityIndexMap::id(Index i) const {
  if (i >= ids_.size()) {
    throw std::out_of_range("entity index " + std::to_string(i) + " out of range");
  }
  return ids_[i];
}

}  // namespace tridiff
