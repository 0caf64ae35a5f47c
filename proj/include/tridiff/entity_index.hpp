#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tridiff/types.hpp"

namespace tridiff {

// Bijection between external identifier strings and dense indices [0, size).
// Indices are handed out in first-seen order.
class EntityIndexMap {
 public:
  EntityIndexMap() = default;
  explicit EntityIndexMap(std::vector<std::string> external_ids);

  // Returns the index of `id`, assigning the next free one if unseen.
  Index intern(std::string_view id);

  std::optional<Index> find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id).has_value(); }

  // Throws std::out_of_range for i >= size().
  const std::string& id(Index i) const;

  const std::vector<std::string>& external_ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  friend bool operator==(const EntityIndexMap& a, const EntityIndexMap& b) {
    return a.ids_ == b.ids_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index, Hash, std::equal_to<>> index_of_;
};

}  // namespace tridiff
