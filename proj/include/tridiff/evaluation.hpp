#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridiff/ingest.hpp"
#include "tridiff/recommender.hpp"
#include "tridiff/similarity.hpp"

namespace tridiff {

// Raised when a metric has no defined value (empty test set).
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Which similarity rows feed the recommender. Fused sweeps the lambda grid;
// the single-channel modes evaluate one channel row as-is.
enum class ChannelMode { Fused, ObjectOnly, TagOnly };

std::string_view to_string(ChannelMode mode);

// min, min + step, ... up to max (inclusive within 1e-9), each value rounded
// to 1e-9 so 0.02 steps print as 0.02, 0.04, ... Throws on step <= 0 or
// bounds outside [0, 1].
std::vector<double> make_lambda_grid(double min, double max, double step);

struct ExperimentConfig {
  Measure measure = Measure::Diffusion;
  ChannelMode channels = ChannelMode::Fused;
  std::vector<double> lambda_grid = make_lambda_grid(0.0, 1.0, 0.02);
  std::size_t runs = 5;
  double train_fraction = 0.9;
  std::vector<std::size_t> list_lengths{10, 20};
  std::uint64_t base_seed = 1;
  double rating_threshold = 0.0;  // provenance only; applied at ingest
  std::size_t threads = 0;        // 0 = hardware concurrency
};

// Throws std::invalid_argument describing the first violated constraint.
void validate(const ExperimentConfig& config);

// Lambda used for a given grid value: the value itself when fused, 1 for
// object-only, 0 for tag-only.
std::vector<double> effective_lambdas(const ExperimentConfig& config);

struct RankedPair {
  Edge pair;        // (user, object) from the test set
  double midrank;   // 1-based position, ties share the block's mean position
  std::size_t uncollected;
  double relative;  // midrank / uncollected
};

// Per test pair, the position of the held-out object among every object the
// user has not collected in training. Returned in test_edges order.
std::vector<RankedPair> rank_of_test_pairs(const EvaluationSplit& split, Measure measure,
                                           double lambda);
std::vector<RankedPair> rank_of_test_pairs(const EvaluationSplit& split, Measure measure,
                                           ChannelMode channels, double lambda);

// Arithmetic mean; throws UndefinedMetricError on an empty list.
double ranking_score(std::span<const double> relative_ranks);
double ranking_score(std::span<const RankedPair> ranks);

struct RecallPrecision {
  double recall = 0.0;
  double precision = 0.0;
  std::size_t hits = 0;  // sum over users of |top-L & test objects|
};

// Recall = hits / N_p, Precision = hits / (m * L) with m the full user count.
// Throws UndefinedMetricError on an empty test set, std::invalid_argument on L == 0.
RecallPrecision recall_precision_at(const EvaluationSplit& split, Measure measure, double lambda,
                                    std::size_t list_length);

struct CellResult {
  double lambda = 0.0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t test_count = 0;  // N_p
  std::size_t user_count = 0;  // m
  double rank_score = 0.0;
  std::map<std::size_t, std::size_t> hits;
  std::map<std::size_t, double> recall;
  std::map<std::size_t, double> precision;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct MeanMetrics {
  double lambda = 0.0;
  std::size_t valid_runs = 0;
  double rank_score = 0.0;
  std::map<std::size_t, double> recall;
  std::map<std::size_t, double> precision;
};

struct Optimum {
  double lambda = 0.0;
  double value = 0.0;
};

struct MetricsReport {
  Measure measure = Measure::Diffusion;
  ChannelMode channels = ChannelMode::Fused;
  std::vector<std::size_t> list_lengths;
  std::vector<CellResult> cells;   // lambda-major, then run
  std::vector<MeanMetrics> means;  // one per lambda with at least one valid run
  std::optional<Optimum> best_rank_score;  // minimum
  std::map<std::size_t, Optimum> best_recall;     // maximum
  std::map<std::size_t, Optimum> best_precision;  // maximum

  // (RankS at lambda = 1 - best RankS) / RankS at lambda = 1, when lambda = 1
  // is on the grid.
  std::optional<double> rank_score_improvement() const;
  const MeanMetrics* mean_at(double lambda) const;
};

// Splits with seed base_seed + run for each run, evaluates every lambda on
// each split and aggregates. Cells whose metrics are undefined carry an error
// instead of aborting the sweep. Deterministic for a given config, whatever
// the thread count.
MetricsReport run_experiment(const TripartiteDataset& dataset, const ExperimentConfig& config);

// Fills means and optima from cells.
void summarize(MetricsReport& report);

}  // namespace tridiff
