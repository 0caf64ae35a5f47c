#include "tridiff/snapshot.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tridiff {

namespace {

constexpr std::string_view kMagic = "tridiff-snapshot 1";

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) fail("unexpected end of snapshot");
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::size_t section(std::string_view name) {
    const auto line = next();
    const auto space = line.find(' ');
    if (space == std::string::npos || std::string_view(line).substr(0, space) != name) {
      fail("expected section '" + std::string(name) + "'");
    }
    return number(std::string_view(line).substr(space + 1));
  }

  std::size_t number(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("snapshot line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

EntityIndexMap read_ids(LineReader& reader, std::string_view name) {
  const auto count = reader.section(name);
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ids.push_back(reader.next());
  try {
    return EntityIndexMap(std::move(ids));
  } catch (const std::invalid_argument& e) {
    reader.fail(e.what());
  }
}

BipartiteGraph read_graph(LineReader& reader, std::string_view name, std::size_t left,
                          std::size_t right) {
  const auto count = reader.section(name);
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto line = reader.next();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) reader.fail("expected '<left>\\t<right>'");
    const std::string_view view(line);
    edges.emplace_back(static_cast<Index>(reader.number(view.substr(0, tab))),
                       static_cast<Index>(reader.number(view.substr(tab + 1))));
  }
  try {
    return BipartiteGraph::build(edges, left, right);
  } catch (const std::out_of_range& e) {
    reader.fail(e.what());
  }
}

void write_ids(std::ostream& out, std::string_view name, const EntityIndexMap& map) {
  out << name << ' ' << map.size() << '\n';
  for (const auto& id : map.external_ids()) out << id << '\n';
}

void write_graph(std::ostream& out, std::string_view name, const BipartiteGraph& g) {
  out << name << ' ' << g.edge_count() << '\n';
  for (Index u = 0; u < g.left_count(); ++u) {
    for (Index x : g.left_neighbors(u)) out << u << '\t' << x << '\n';
  }
}

}  // namespace

DatasetSummary dataset_summary(const TripartiteDataset& dataset) {
  return {dataset.user_count(), dataset.object_count(), dataset.tag_count(),
          dataset.user_object().edge_count(), dataset.user_tag().edge_count()};
}

void write_snapshot(std::ostream& out, const TripartiteDataset& dataset) {
  out << kMagic << '\n';
  write_ids(out, "users", dataset.users());
  write_ids(out, "objects", dataset.objects());
  write_ids(out, "tags", dataset.tags());
  write_graph(out, "user_object", dataset.user_object());
  write_graph(out, "user_tag", dataset.user_tag());
}

TripartiteDataset read_snapshot(std::istream& in) {
  LineReader reader(in);
  if (reader.next() != kMagic) reader.fail("not a tridiff snapshot");
  auto users = read_ids(reader, "users");
  auto objects = read_ids(reader, "objects");
  auto tags = read_ids(reader, "tags");
  auto uo = read_graph(reader, "user_object", users.size(), objects.size());
  auto ut = read_graph(reader, "user_tag", users.size(), tags.size());
  return TripartiteDataset(std::move(users), std::move(objects), std::move(tags), std::move(uo),
                           std::move(ut));
}

}  // namespace tridiff
