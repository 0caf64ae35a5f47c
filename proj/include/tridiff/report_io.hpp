#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tridiff/evaluation.hpp"
#include "tridiff/snapshot.hpp"

namespace tridiff {

// One row per (similarity, lambda, run):
//   similarity,lambda,run,rank_score,recall@L...,precision@L...
// Reals use 17 significant digits; undefined cells print "nan".
// All reports must share the same list lengths.
void write_cells_csv(std::ostream& out, std::span<const MetricsReport> reports);

struct CsvCell {
  std::string similarity;
  double lambda = 0.0;
  std::size_t run = 0;
  double rank_score = 0.0;
  std::map<std::size_t, double> recall;
  std::map<std::size_t, double> precision;
};

// Inverse of write_cells_csv. Throws std::runtime_error on malformed input.
std::vector<CsvCell> read_cells_csv(std::istream& in);

void write_cells_json(std::ostream& out, std::span<const MetricsReport> reports);

// Means per lambda, per-metric optima and the RankS improvement over
// lambda = 1, keyed by similarity name.
void write_summary_json(std::ostream& out, std::span<const MetricsReport> reports,
                        const DatasetSummary& dataset, const ExperimentConfig& config);

std::string summary_json(const DatasetSummary& dataset);

}  // namespace tridiff
