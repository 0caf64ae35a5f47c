#include "tridiff/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace tridiff {

std::string_view to_string(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::Fused: return "fused";
    case ChannelMode::ObjectOnly: return "object-only";
    case ChannelMode::TagOnly: return "tag-only";
  }
  return "?";
}

std::vector<double> make_lambda_grid(double min, double max, double step) {
  if (!(min >= 0.0 && max <= 1.0 && min <= max)) {
    throw std::invalid_argument("lambda bounds must satisfy 0 <= min <= max <= 1");
  }
  if (!(step > 0.0)) throw std::invalid_argument("lambda step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double raw = min + static_cast<double>(i) * step;
    grid.push_back(std::min(max, std::round(raw * 1e9) / 1e9));
  }
  return grid;
}

void validate(const ExperimentConfig& config) {
  if (config.lambda_grid.empty()) throw std::invalid_argument("lambda grid is empty");
  for (double l : config.lambda_grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("lambda values must lie in [0, 1]");
  }
  if (std::adjacent_find(config.lambda_grid.begin(), config.lambda_grid.end(),
                         std::greater_equal<>()) != config.lambda_grid.end()) {
    throw std::invalid_argument("lambda grid must be strictly increasing");
  }
  if (config.runs == 0) throw std::invalid_argument("runs must be at least 1");
  if (!(config.train_fraction > 0.0 && config.train_fraction <= 1.0)) {
    throw std::invalid_argument("train fraction must lie in (0, 1]");
  }
  if (config.list_lengths.empty()) throw std::invalid_argument("no list lengths given");
  for (auto l : config.list_lengths) {
    if (l == 0) throw std::invalid_argument("list lengths must be positive");
  }
}

std::vector<double> effective_lambdas(const ExperimentConfig& config) {
  switch (config.channels) {
    case ChannelMode::ObjectOnly: return {1.0};
    case ChannelMode::TagOnly: return {0.0};
    case ChannelMode::Fused: return config.lambda_grid;
  }
  return {};
}

namespace {

// Contiguous run of test edges belonging to one user.
struct UserBlock {
  Index user;
  std::size_t begin;
  std::size_t end;
};

std::vector<UserBlock> group_by_user(const std::vector<Edge>& test_edges) {
  std::vector<UserBlock> blocks;
  for (std::size_t i = 0; i < test_edges.size(); ++i) {
    if (blocks.empty() || blocks.back().user != test_edges[i].first) {
      blocks.push_back({test_edges[i].first, i, i});
    }
    blocks.back().end = i + 1;
  }
  return blocks;
}

struct ChannelRows {
  SimilarityRow object;
  SimilarityRow tag;
};

ChannelRows channel_rows(const TripartiteDataset& training, Measure measure, Index v,
                         ChannelMode mode, SimilarityWorkspace& ws) {
  ChannelRows rows;
  if (mode != ChannelMode::TagOnly) {
    rows.object = similarity_row(measure, training.user_object(), v, Channel::Object, ws);
  }
  if (mode != ChannelMode::ObjectOnly) {
    rows.tag = similarity_row(measure, training.user_tag(), v, Channel::Tag, ws);
  }
  return rows;
}

const SimilarityRow& pick_row(const ChannelRows& rows, ChannelMode mode, double lambda,
                              SimilarityRow& fused_storage) {
  switch (mode) {
    case ChannelMode::ObjectOnly: return rows.object;
    case ChannelMode::TagOnly: return rows.tag;
    case ChannelMode::Fused: break;
  }
  fused_storage = fuse(rows.object, rows.tag, lambda);
  return fused_storage;
}

// Midrank of every held-out object of one user, plus hit counts for each L.
// `hits_out` is indexed like `list_lengths`.
void evaluate_user(const TripartiteDataset& training, const ScoreVector& scores,
                   std::span<const Edge> tests, std::span<RankedPair> ranks_out,
                   std::span<const std::size_t> list_lengths, std::span<std::size_t> hits_out) {
  const Index v = scores.target;
  const std::size_t uncollected = training.object_count() - training.user_object().left_degree(v);
  const std::size_t positive = scores.entries.size();

  std::vector<double> keys;
  keys.reserve(positive);
  for (const auto& [a, w] : scores.entries) keys.push_back(score_key(w));

  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Index object = tests[i].second;
    const double s = score_key(scores.score(object));
    std::size_t greater = 0;
    std::size_t equal = 0;
    if (s > 0.0) {
      for (const double w : keys) {
        greater += w > s;
        equal += w == s;
      }
    } else {
      greater = positive;
      equal = uncollected - positive;
    }
    const double midrank =
        static_cast<double>(greater) + static_cast<double>(equal + 1) / 2.0;
    ranks_out[i] = {tests[i], midrank, uncollected,
                    midrank / static_cast<double>(uncollected)};
  }

  if (list_lengths.empty()) return;
  const auto longest = *std::max_element(list_lengths.begin(), list_lengths.end());
  const RecommendationList list = top_l(scores, longest);
  for (std::size_t k = 0; k < list_lengths.size(); ++k) {
    const auto take = std::min(list_lengths[k], list.entries.size());
    std::size_t hits = 0;
    for (std::size_t j = 0; j < take; ++j) {
      const Edge probe{v, list.entries[j].first};
      hits += std::binary_search(tests.begin(), tests.end(), probe);
    }
    hits_out[k] = hits;
  }
}

struct SplitEvaluation {
  // [lambda index][test pair]
  std::vector<std::vector<RankedPair>> ranks;
  // [lambda index][list length index]
  std::vector<std::vector<std::size_t>> hits;
};

SplitEvaluation evaluate_split(const EvaluationSplit& split, Measure measure, ChannelMode mode,
                               std::span<const double> lambdas,
                               std::span<const std::size_t> list_lengths, std::size_t threads) {
  const auto blocks = group_by_user(split.test_edges);
  const std::size_t n_lambda = lambdas.size();
  const std::size_t n_len = list_lengths.size();

  SplitEvaluation out;
  out.ranks.assign(n_lambda, std::vector<RankedPair>(split.test_edges.size()));
  // Per (block, lambda, L) so workers never share a slot.
  std::vector<std::size_t> block_hits(blocks.size() * n_lambda * n_len, 0);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    SimilarityWorkspace sim_ws;
    ScoreWorkspace score_ws;
    SimilarityRow fused;
    for (std::size_t b = next++; b < blocks.size(); b = next++) {
      const auto& block = blocks[b];
      const ChannelRows rows = channel_rows(split.training, measure, block.user, mode, sim_ws);
      const std::span<const Edge> tests(split.test_edges.data() + block.begin,
                                        block.end - block.begin);
      for (std::size_t li = 0; li < n_lambda; ++li) {
        const SimilarityRow& row = pick_row(rows, mode, lambdas[li], fused);
        const ScoreVector scores = score_objects(split.training, row, score_ws);
        evaluate_user(split.training, scores, tests,
                      std::span(out.ranks[li].data() + block.begin, tests.size()), list_lengths,
                      std::span(block_hits.data() + (b * n_lambda + li) * n_len, n_len));
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, blocks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  out.hits.assign(n_lambda, std::vector<std::size_t>(n_len, 0));
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t li = 0; li < n_lambda; ++li) {
      for (std::size_t k = 0; k < n_len; ++k) {
        out.hits[li][k] += block_hits[(b * n_lambda + li) * n_len + k];
      }
    }
  }
  return out;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::vector<RankedPair> rank_of_test_pairs(const EvaluationSplit& split, Measure measure,
                                           double lambda) {
  return rank_of_test_pairs(split, measure, ChannelMode::Fused, lambda);
}

std::vector<RankedPair> rank_of_test_pairs(const EvaluationSplit& split, Measure measure,
                                           ChannelMode channels, double lambda) {
  const double lambdas[] = {lambda};
  auto eval = evaluate_split(split, measure, channels, lambdas, {}, 1);
  return std::move(eval.ranks.front());
}

double ranking_score(std::span<const double> relative_ranks) {
  if (relative_ranks.empty()) {
    throw UndefinedMetricError("ranking score undefined for an empty test set");
  }
  double sum = 0.0;
  for (double r : relative_ranks) sum += r;
  return sum / static_cast<double>(relative_ranks.size());
}

double ranking_score(std::span<const RankedPair> ranks) {
  std::vector<double> rel;
  rel.reserve(ranks.size());
  for (const auto& r : ranks) rel.push_back(r.relative);
  return ranking_score(rel);
}

RecallPrecision recall_precision_at(const EvaluationSplit& split, Measure measure, double lambda,
                                    std::size_t list_length) {
  if (list_length == 0) throw std::invalid_argument("list length must be positive");
  if (split.test_edges.empty()) {
    throw UndefinedMetricError("recall/precision undefined for an empty test set");
  }
  const double lambdas[] = {lambda};
  const std::size_t lengths[] = {list_length};
  const auto eval = evaluate_split(split, measure, ChannelMode::Fused, lambdas, lengths, 1);
  RecallPrecision out;
  out.hits = eval.hits[0][0];
  out.recall = static_cast<double>(out.hits) / static_cast<double>(split.test_count());
  out.precision = static_cast<double>(out.hits) /
                  (static_cast<double>(split.training.user_count()) *
                   static_cast<double>(list_length));
  return out;
}

MetricsReport run_experiment(const TripartiteDataset& dataset, const ExperimentConfig& config) {
  validate(config);
  const auto lambdas = effective_lambdas(config);
  const auto threads = resolve_threads(config.threads);

  MetricsReport report;
  report.measure = config.measure;
  report.channels = config.channels;
  report.list_lengths = config.list_lengths;

  // cells[lambda][run]
  std::vector<std::vector<CellResult>> grid(lambdas.size(), std::vector<CellResult>(config.runs));
  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::uint64_t seed = config.base_seed + run;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      auto& cell = grid[li][run];
      cell.lambda = lambdas[li];
      cell.run = run;
      cell.seed = seed;
      cell.user_count = dataset.user_count();
    }
    const auto fail_run = [&](const std::string& why) {
      for (auto& per_lambda : grid) {
        per_lambda[run].error = why;
        per_lambda[run].rank_score = std::numeric_limits<double>::quiet_NaN();
      }
    };

    EvaluationSplit sp;
    try {
      sp = split(dataset, config.train_fraction, seed);
    } catch (const std::exception& e) {
      fail_run(e.what());
      continue;
    }
    if (sp.test_edges.empty()) {
      fail_run("undefined metric: empty test set");
      continue;
    }

    const auto eval = evaluate_split(sp, config.measure, config.channels, lambdas,
                                     config.list_lengths, threads);
    const double n_p = static_cast<double>(sp.test_count());
    const double m = static_cast<double>(dataset.user_count());
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      auto& cell = grid[li][run];
      cell.test_count = sp.test_count();
      cell.rank_score = ranking_score(std::span<const RankedPair>(eval.ranks[li]));
      for (std::size_t k = 0; k < config.list_lengths.size(); ++k) {
        const auto len = config.list_lengths[k];
        const auto hits = eval.hits[li][k];
        cell.hits[len] = hits;
        cell.recall[len] = static_cast<double>(hits) / n_p;
        cell.precision[len] = static_cast<double>(hits) / (m * static_cast<double>(len));
      }
    }
  }

  for (auto& per_lambda : grid) {
    for (auto& cell : per_lambda) report.cells.push_back(std::move(cell));
  }
  summarize(report);
  return report;
}

void summarize(MetricsReport& report) {
  report.means.clear();
  report.best_rank_score.reset();
  report.best_recall.clear();
  report.best_precision.clear();

  for (std::size_t i = 0; i < report.cells.size();) {
    const double lambda = report.cells[i].lambda;
    MeanMetrics mean;
    mean.lambda = lambda;
    for (; i < report.cells.size() && report.cells[i].lambda == lambda; ++i) {
      const auto& cell = report.cells[i];
      if (!cell.ok()) continue;
      ++mean.valid_runs;
      mean.rank_score += cell.rank_score;
      for (const auto& [len, r] : cell.recall) mean.recall[len] += r;
      for (const auto& [len, p] : cell.precision) mean.precision[len] += p;
    }
    if (mean.valid_runs == 0) continue;
    const double runs = static_cast<double>(mean.valid_runs);
    mean.rank_score /= runs;
    for (auto& [len, r] : mean.recall) r /= runs;
    for (auto& [len, p] : mean.precision) p /= runs;
    report.means.push_back(std::move(mean));
  }

  for (const auto& mean : report.means) {
    if (!report.best_rank_score || mean.rank_score < report.best_rank_score->value) {
      report.best_rank_score = Optimum{mean.lambda, mean.rank_score};
    }
    for (const auto& [len, r] : mean.recall) {
      auto it = report.best_recall.find(len);
      if (it == report.best_recall.end() || r > it->second.value) {
        report.best_recall[len] = Optimum{mean.lambda, r};
      }
    }
    for (const auto& [len, p] : mean.precision) {
      auto it = report.best_precision.find(len);
      if (it == report.best_precision.end() || p > it->second.value) {
        report.best_precision[len] = Optimum{mean.lambda, p};
      }
    }
  }
}

const MeanMetrics* MetricsReport::mean_at(double lambda) const {
  for (const auto& m : means) {
    if (m.lambda == lambda) return &m;
  }
  return nullptr;
}

std::optional<double> MetricsReport::rank_score_improvement() const {
  const auto* baseline = mean_at(1.0);
  if (baseline == nullptr || !best_rank_score || baseline->rank_score <= 0.0) return std::nullopt;
  return (baseline->rank_score - best_rank_score->value) / baseline->rank_score;
}

}  // namespace tridiff
