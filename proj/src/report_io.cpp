#include "tridiff/report_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

namespace tridiff {

namespace {

using nlohmann::json;

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.17g}", v);
}

const std::vector<std::size_t>& shared_lengths(std::span<const MetricsReport> reports) {
  static const std::vector<std::size_t> none;
  if (reports.empty()) return none;
  for (const auto& r : reports) {
    if (r.list_lengths != reports.front().list_lengths) {
      throw std::invalid_argument("reports disagree on list lengths");
    }
  }
  return reports.front().list_lengths;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_real(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" +
                             std::string(s) + "'");
  }
  return v;
}

std::size_t parse_length(std::string_view column, std::string_view prefix) {
  std::size_t len = 0;
  const auto digits = column.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), len);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw std::runtime_error("csv header: bad column '" + std::string(column) + "'");
  }
  return len;
}

json optimum_json(const Optimum& o) { return {{"lambda", o.lambda}, {"value", o.value}}; }

}  // namespace

void write_cells_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  const auto& lengths = shared_lengths(reports);
  out << "similarity,lambda,run,rank_score";
  for (auto l : lengths) out << ",recall@" << l;
  for (auto l : lengths) out << ",precision@" << l;
  out << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& report : reports) {
    for (const auto& cell : report.cells) {
      out << to_string(report.measure) << ',' << real(cell.lambda) << ',' << cell.run << ','
          << real(cell.ok() ? cell.rank_score : nan);
      for (auto l : lengths) out << ',' << real(cell.ok() ? cell.recall.at(l) : nan);
      for (auto l : lengths) out << ',' << real(cell.ok() ? cell.precision.at(l) : nan);
      out << '\n';
    }
  }
}

std::vector<CsvCell> read_cells_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  const auto header = split_commas(line);
  if (header.size() < 4 || header[0] != "similarity" || header[1] != "lambda" ||
      header[2] != "run" || header[3] != "rank_score") {
    throw std::runtime_error("csv: unexpected header '" + line + "'");
  }
  std::vector<std::pair<bool, std::size_t>> metric_columns;  // (is_recall, L)
  for (std::size_t i = 4; i < header.size(); ++i) {
    if (header[i].starts_with("recall@")) {
      metric_columns.emplace_back(true, parse_length(header[i], "recall@"));
    } else if (header[i].starts_with("precision@")) {
      metric_columns.emplace_back(false, parse_length(header[i], "precision@"));
    } else {
      throw std::runtime_error("csv header: unknown column '" + std::string(header[i]) + "'");
    }
  }

  std::vector<CsvCell> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields");
    }
    CsvCell cell;
    cell.similarity = std::string(fields[0]);
    cell.lambda = parse_real(fields[1], line_no);
    cell.run = static_cast<std::size_t>(parse_real(fields[2], line_no));
    cell.rank_score = parse_real(fields[3], line_no);
    for (std::size_t i = 0; i < metric_columns.size(); ++i) {
      const auto [is_recall, len] = metric_columns[i];
      (is_recall ? cell.recall : cell.precision)[len] = parse_real(fields[4 + i], line_no);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

void write_cells_json(std::ostream& out, std::span<const MetricsReport> reports) {
  json cells = json::array();
  for (const auto& report : reports) {
    for (const auto& cell : report.cells) {
      json j = {{"similarity", to_string(report.measure)},
                {"lambda", cell.lambda},
                {"run", cell.run},
                {"seed", cell.seed},
                {"test_count", cell.test_count},
                {"user_count", cell.user_count}};
      if (cell.ok()) {
        j["rank_score"] = cell.rank_score;
        for (const auto& [len, v] : cell.recall) j["recall"][std::to_string(len)] = v;
        for (const auto& [len, v] : cell.precision) j["precision"][std::to_string(len)] = v;
        for (const auto& [len, v] : cell.hits) j["hits"][std::to_string(len)] = v;
      } else {
        j["error"] = *cell.error;
      }
      cells.push_back(std::move(j));
    }
  }
  out << cells.dump(2) << '\n';
}

void write_summary_json(std::ostream& out, std::span<const MetricsReport> reports,
                        const DatasetSummary& dataset, const ExperimentConfig& config) {
  json root;
  root["dataset"] = json::parse(summary_json(dataset));
  root["config"] = {{"runs", config.runs},
                    {"train_fraction", config.train_fraction},
                    {"base_seed", config.base_seed},
                    {"rating_threshold", config.rating_threshold},
                    {"lambda_grid", config.lambda_grid},
                    {"list_lengths", config.list_lengths}};
  for (const auto& report : reports) {
    json j;
    j["channels"] = to_string(report.channels);
    json means = json::array();
    for (const auto& m : report.means) {
      json row = {{"lambda", m.lambda}, {"valid_runs", m.valid_runs}, {"rank_score", m.rank_score}};
      for (const auto& [len, v] : m.recall) row["recall"][std::to_string(len)] = v;
      for (const auto& [len, v] : m.precision) row["precision"][std::to_string(len)] = v;
      means.push_back(std::move(row));
    }
    j["means"] = std::move(means);
    json optima;
    if (report.best_rank_score) optima["rank_score"] = optimum_json(*report.best_rank_score);
    for (const auto& [len, o] : report.best_recall) optima["recall"][std::to_string(len)] = optimum_json(o);
    for (const auto& [len, o] : report.best_precision) {
      optima["precision"][std::to_string(len)] = optimum_json(o);
    }
    j["optima"] = std::move(optima);
    const auto improvement = report.rank_score_improvement();
    j["rank_score_improvement_over_lambda_1"] = improvement ? json(*improvement) : json(nullptr);
    json errors = json::array();
    for (const auto& cell : report.cells) {
      if (!cell.ok()) errors.push_back({{"lambda", cell.lambda}, {"run", cell.run}, {"error", *cell.error}});
    }
    j["errors"] = std::move(errors);
    root["similarities"][std::string(to_string(report.measure))] = std::move(j);
  }
  out << root.dump(2) << '\n';
}

std::string summary_json(const DatasetSummary& dataset) {
  const json j = {{"users", dataset.users},
                  {"objects", dataset.objects},
                  {"tags", dataset.tags},
                  {"user_object_edges", dataset.user_object_edges},
                  {"user_tag_edges", dataset.user_tag_edges}};
  return j.dump(2);
}

}  // namespace tridiff
