#pragma once

#include "tridiff/ingest.hpp"

namespace tridiff::fixtures {

// Target user 0 collects object 0 alongside users 1-3 and has 100 uncollected
// objects. Object 1 is held by users 1-3, object 2 by users 1-2 and the
// held-out object 3 by user 1 only, so with the object channel the test pair
// (0, 3) ranks uniquely third; the other 97 objects score zero.
EvaluationSplit third_of_hundred();

// Small tagged dataset built from explicit edge lists; ids are "u<i>", "o<i>",
// "t<i>" counting from 1.
TripartiteDataset tagged(const std::vector<Edge>& user_object, std::size_t users,
                         std::size_t objects, const std::vector<Edge>& user_tag,
                         std::size_t tags);

}  // namespace tridiff::fixtures
