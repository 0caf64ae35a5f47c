#pragma once

#include <cstdint>
#include <utility>

namespace tridiff {

// Dense node index inside one node set (users, objects or tags).
using Index = std::uint32_t;

// (left, right) pair; left is always a user.
using Edge = std::pair<Index, Index>;

}  // namespace tridiff
