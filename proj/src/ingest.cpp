#include "tridiff/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string_view>

namespace tridiff {

namespace {

enum class Delimiter { Tab, DoubleColon, Comma };

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Delimiter detect(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) return Delimiter::Tab;
  if (line.find("::") != std::string_view::npos) return Delimiter::DoubleColon;
  if (line.find(',') != std::string_view::npos) return Delimiter::Comma;
  return Delimiter::Tab;
}

// Returns false on an unterminated quote.
bool split_fields(std::string_view line, Delimiter delim, std::vector<std::string>& out) {
  out.clear();
  if (delim == Delimiter::Comma) {
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        out.push_back(std::move(field));
        field.clear();
      } else {
        field.push_back(c);
      }
    }
    out.push_back(std::move(field));
    return !quoted;
  }

  const std::string_view sep = delim == Delimiter::Tab ? "\t" : "::";
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return true;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
}

bool is_numeric_id(std::string_view s) {
  s = trim(s);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Drives the per-line callback over a stream, handling delimiter detection,
// blank lines and header skipping.
template <typename OnFields>
void scan(std::istream& in, StreamKind kind, ParseResult& result, OnFields&& on_fields) {
  std::string line;
  std::vector<std::string> fields;
  std::optional<Delimiter> delim;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!delim) delim = detect(line);
    if (!split_fields(line, *delim, fields)) {
      result.issues.push_back({kind, line_no, "unterminated quoted field"});
      continue;
    }
    if (!is_numeric_id(fields.front())) {
      ++result.skipped_headers;
      continue;
    }
    if (auto err = on_fields(fields); !err.empty()) {
      result.issues.push_back({kind, line_no, std::move(err)});
    }
  }
}

}  // namespace

std::string normalize_tag(std::string_view tag) {
  std::string out(trim(tag));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

ParseResult parse(std::istream& object_stream, std::istream& tag_stream,
                  const ParseOptions& options) {
  ParseResult result;

  scan(object_stream, StreamKind::Objects, result, [&](const std::vector<std::string>& f) {
    if (f.size() < 2 || f.size() > 4) {
      return "expected 2-4 fields, got " + std::to_string(f.size());
    }
    const auto object = trim(f[1]);
    if (object.empty()) return std::string("empty object id");
    std::optional<double> rating;
    if (f.size() >= 3 && !trim(f[2]).empty()) {
      rating = parse_number(f[2]);
      if (!rating || *rating <= 0.0 || *rating > 5.0) {
        return "rating '" + f[2] + "' not a number in (0, 5]";
      }
    }
    if (rating && *rating < options.rating_threshold) {
      ++result.dropped_below_threshold;
      return std::string();
    }
    result.records.object_events.push_back(
        {std::string(trim(f[0])), std::string(object), rating});
    return std::string();
  });

  scan(tag_stream, StreamKind::Tags, result, [&](const std::vector<std::string>& f) {
    // user,tag | user,object,tag | user,object,tag,timestamp
    if (f.size() < 2 || f.size() > 4) {
      return "expected 2-4 fields, got " + std::to_string(f.size());
    }
    const std::string& raw_tag = f.size() == 2 ? f[1] : f[2];
    std::string tag = options.normalize_tags ? normalize_tag(raw_tag) : raw_tag;
    if (trim(tag).empty()) return std::string("empty tag");
    std::optional<std::string> object;
    if (f.size() >= 3 && !trim(f[1]).empty()) object = std::string(trim(f[1]));
    result.records.tag_events.push_back({std::string(trim(f[0])), std::move(object), std::move(tag)});
    return std::string();
  });

  return result;
}

CoreFilterResult core_filter(const RawRecords& records) {
  EntityIndexMap users;
  EntityIndexMap objects;
  EntityIndexMap tags;
  std::vector<Edge> uo;
  std::vector<Edge> ut;
  uo.reserve(records.object_events.size());
  ut.reserve(records.tag_events.size());
  for (const auto& e : records.object_events) {
    const Index u = users.intern(e.user);
    uo.emplace_back(u, objects.intern(e.object));
  }
  for (const auto& e : records.tag_events) {
    const Index u = users.intern(e.user);
    ut.emplace_back(u, tags.intern(e.tag));
  }
  std::sort(uo.begin(), uo.end());
  uo.erase(std::unique(uo.begin(), uo.end()), uo.end());
  std::sort(ut.begin(), ut.end());
  ut.erase(std::unique(ut.begin(), ut.end()), ut.end());

  std::vector<char> user_alive(users.size(), 1);
  std::vector<char> object_alive(objects.size(), 1);
  std::vector<char> tag_alive(tags.size(), 1);
  std::vector<std::size_t> object_deg;
  std::vector<std::size_t> tag_deg;
  std::vector<std::size_t> user_obj_deg;
  std::vector<std::size_t> user_tag_deg;

  CoreFilterResult result;
  bool changed = true;
  while (changed) {
    changed = false;
    ++result.rounds;
    object_deg.assign(objects.size(), 0);
    tag_deg.assign(tags.size(), 0);
    user_obj_deg.assign(users.size(), 0);
    user_tag_deg.assign(users.size(), 0);
    for (const auto& [u, o] : uo) {
      ++object_deg[o];
      ++user_obj_deg[u];
    }
    for (const auto& [u, t] : ut) {
      ++tag_deg[t];
      ++user_tag_deg[u];
    }
    for (std::size_t o = 0; o < objects.size(); ++o) {
      if (object_alive[o] && object_deg[o] < 2) object_alive[o] = 0, changed = true;
    }
    for (std::size_t t = 0; t < tags.size(); ++t) {
      if (tag_alive[t] && tag_deg[t] < 2) tag_alive[t] = 0, changed = true;
    }
    for (std::size_t u = 0; u < users.size(); ++u) {
      if (user_alive[u] && (user_obj_deg[u] == 0 || user_tag_deg[u] == 0)) {
        user_alive[u] = 0;
        changed = true;
      }
    }
    if (changed) {
      std::erase_if(uo, [&](const Edge& e) { return !user_alive[e.first] || !object_alive[e.second]; });
      std::erase_if(ut, [&](const Edge& e) { return !user_alive[e.first] || !tag_alive[e.second]; });
    }
  }

  // Raw indices are already first-seen, so survivors renumber in raw order.
  const auto compact = [](const EntityIndexMap& raw, const std::vector<char>& alive,
                          std::vector<Index>& remap) {
    EntityIndexMap out;
    remap.assign(raw.size(), 0);
    for (Index i = 0; i < raw.size(); ++i) {
      if (alive[i]) remap[i] = out.intern(raw.id(i));
    }
    return out;
  };
  std::vector<Index> user_remap;
  std::vector<Index> object_remap;
  std::vector<Index> tag_remap;
  EntityIndexMap kept_users = compact(users, user_alive, user_remap);
  EntityIndexMap kept_objects = compact(objects, object_alive, object_remap);
  EntityIndexMap kept_tags = compact(tags, tag_alive, tag_remap);
  for (auto& [u, o] : uo) u = user_remap[u], o = object_remap[o];
  for (auto& [u, t] : ut) u = user_remap[u], t = tag_remap[t];

  auto user_object = BipartiteGraph::build(uo, kept_users.size(), kept_objects.size());
  auto user_tag = BipartiteGraph::build(ut, kept_users.size(), kept_tags.size());
  result.empty = kept_users.empty();
  result.dataset = TripartiteDataset(std::move(kept_users), std::move(kept_objects),
                                     std::move(kept_tags), std::move(user_object),
                                     std::move(user_tag));
  return result;
}

EvaluationSplit split(const TripartiteDataset& dataset, double train_fraction,
                      std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1]");
  }
  if (dataset.empty()) {
    throw std::invalid_argument("cannot split an empty dataset");
  }
  std::vector<Edge> edges = dataset.user_object().edges();
  const auto train_count = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(edges.size())));

  std::mt19937_64 rng(seed);
  std::shuffle(edges.begin(), edges.end(), rng);

  EvaluationSplit out;
  out.seed = seed;
  out.test_edges.assign(edges.begin() + static_cast<std::ptrdiff_t>(train_count), edges.end());
  std::sort(out.test_edges.begin(), out.test_edges.end());
  edges.resize(train_count);
  out.training = dataset.with_user_object(
      BipartiteGraph::build(edges, dataset.user_count(), dataset.object_count()));
  return out;
}

}  // namespace tridiff
