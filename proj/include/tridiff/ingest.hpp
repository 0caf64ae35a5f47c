#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "tridiff/tripartite_dataset.hpp"

namespace tridiff {

struct ObjectEvent {
  std::string user;
  std::string object;
  std::optional<double> rating;

  friend bool operator==(const ObjectEvent&, const ObjectEvent&) = default;
};

struct TagEvent {
  std::string user;
  std::optional<std::string> object;  // carried through, unused by the model
  std::string tag;

  friend bool operator==(const TagEvent&, const TagEvent&) = default;
};

struct RawRecords {
  std::vector<ObjectEvent> object_events;
  std::vector<TagEvent> tag_events;
};

enum class StreamKind { Objects, Tags };

struct ParseIssue {
  StreamKind stream;
  std::size_t line;  // 1-based
  std::string message;
};

struct ParseOptions {
  // Object events rated below this are dropped; unrated events always pass.
  double rating_threshold = 0.0;
  // Trim surrounding whitespace and lowercase ASCII letters of tag text.
  bool normalize_tags = true;
};

struct ParseResult {
  RawRecords records;
  std::vector<ParseIssue> issues;
  std::size_t skipped_headers = 0;
  std::size_t dropped_below_threshold = 0;
};

// Reads object-event and tag-event logs. Each stream's delimiter (tab, "::"
// or comma) is detected from its first non-empty line; comma files may quote
// fields. Lines whose first field is not numeric are treated as headers and
// skipped. Malformed lines end up in `issues` and never throw.
ParseResult parse(std::istream& object_stream, std::istream& tag_stream,
                  const ParseOptions& options = {});

std::string normalize_tag(std::string_view tag);

struct CoreFilterResult {
  TripartiteDataset dataset;
  bool empty = false;  // fixed point removed everything
  std::size_t rounds = 0;
};

// Iteratively drops objects collected by fewer than two distinct users, tags
// used by fewer than two distinct users, and users left without an object or
// without a tag, until nothing changes. Surviving entities keep first-seen
// order (users: object events first, then tag events).
CoreFilterResult core_filter(const RawRecords& records);

// Held-out user-object pairs plus the training data they were removed from.
struct EvaluationSplit {
  TripartiteDataset training;
  std::vector<Edge> test_edges;  // sorted, unique
  std::uint64_t seed = 0;

  std::size_t test_count() const { return test_edges.size(); }
};

// Seeded uniform partition of user-object edges: round(train_fraction * E)
// stay in training, the rest are held out. Tag edges and index maps are kept
// whole. Throws std::invalid_argument for fractions outside (0, 1] or an
// empty dataset.
EvaluationSplit split(const TripartiteDataset& dataset, double train_fraction,
                      std::uint64_t seed);

}  // namespace tridiff
