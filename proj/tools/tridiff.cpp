// tridiff: ingest tagged interaction logs, sweep the similarity fusion weight
// and print top-L recommendations.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "tridiff/evaluation.hpp"
#include "tridiff/ingest.hpp"
#include "tridiff/recommender.hpp"
#include "tridiff/report_io.hpp"
#include "tridiff/snapshot.hpp"

namespace fs = std::filesystem;
using namespace tridiff;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

constexpr const char* kSnapshotFile = "dataset.snapshot";
constexpr const char* kIngestFile = "ingest.json";

// Failure the user can act on: message goes to stderr, process exits 1.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid flag combination detected after parsing: exits 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestOptions {
  std::string objects;
  std::string tags;
  std::string out;
  double rating_threshold = 0.0;
  bool keep_tag_case = false;
};

struct SweepOptions {
  std::string out;
  std::vector<std::string> similarity{"diffusion", "cosine"};
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  double lambda_step = 0.02;
  std::optional<double> lambda;
  std::size_t runs = 5;
  std::uint64_t seed = 1;
  double train_frac = 0.9;
  std::vector<std::size_t> list_lengths{10, 20};
  std::string format = "csv";
  std::size_t threads = 0;
};

struct RecommendOptions {
  std::string out;
  std::string user;
  double lambda = 0.5;
  std::size_t list_length = 10;
  std::string similarity = "diffusion";
};

std::string env_name(const std::string& flag) {
  std::string name = "TRIDIFF_";
  for (char c : flag) name.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  return name;
}

// Every flag can also be supplied as TRIDIFF_<FLAG> (dashes become underscores).
template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target, const std::string& help) {
  return app->add_option("--" + name, target, help)->envname(env_name(name));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CommandError("cannot read '" + path + "'");
  return in;
}

TripartiteDataset load_snapshot(const std::string& dir) {
  const auto path = fs::path(dir) / kSnapshotFile;
  std::ifstream in(path);
  if (!in) {
    throw CommandError("no snapshot at '" + path.string() + "'; run 'tridiff ingest' first");
  }
  return read_snapshot(in);
}

int cmd_ingest(const IngestOptions& opt) {
  auto objects = open_input(opt.objects);
  auto tags = open_input(opt.tags);

  ParseOptions parse_opts;
  parse_opts.rating_threshold = opt.rating_threshold;
  parse_opts.normalize_tags = !opt.keep_tag_case;
  const auto parsed = parse(objects, tags, parse_opts);

  if (!parsed.issues.empty()) {
    std::cerr << "warning: " << parsed.issues.size() << " malformed line(s) skipped\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(parsed.issues.size(), 10); ++i) {
      const auto& issue = parsed.issues[i];
      std::cerr << "  " << (issue.stream == StreamKind::Objects ? opt.objects : opt.tags) << ':'
                << issue.line << ": " << issue.message << '\n';
    }
  }
  std::cerr << "parsed " << parsed.records.object_events.size() << " object events, "
            << parsed.records.tag_events.size() << " tag events ("
            << parsed.dropped_below_threshold << " below rating threshold)\n";

  const auto filtered = core_filter(parsed.records);
  if (filtered.empty) {
    throw CommandError(
        "dataset is empty after filtering: no object or tag is shared by two users who each "
        "have at least one object and one tag");
  }

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw CommandError("cannot create '" + opt.out + "': " + ec.message());
  {
    std::ofstream snap(fs::path(opt.out) / kSnapshotFile);
    write_snapshot(snap, filtered.dataset);
    if (!snap) throw CommandError("failed writing snapshot to '" + opt.out + "'");
  }

  const auto summary = dataset_summary(filtered.dataset);
  nlohmann::json info = nlohmann::json::parse(summary_json(summary));
  info["rating_threshold"] = opt.rating_threshold;
  info["filter_rounds"] = filtered.rounds;
  std::ofstream(fs::path(opt.out) / kIngestFile) << info.dump(2) << '\n';

  std::cout << fmt::format("users\t{}\nobjects\t{}\ntags\t{}\nuser_object_edges\t{}\nuser_tag_edges\t{}\n",
                           summary.users, summary.objects, summary.tags,
                           summary.user_object_edges, summary.user_tag_edges);
  return 0;
}

int cmd_sweep(const SweepOptions& opt) {
  if (opt.format != "csv" && opt.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  std::vector<Measure> measures;
  try {
    for (const auto& name : opt.similarity) measures.push_back(parse_measure(name));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig config;
  try {
    config.lambda_grid = opt.lambda ? std::vector<double>{*opt.lambda}
                                    : make_lambda_grid(opt.lambda_min, opt.lambda_max, opt.lambda_step);
    config.runs = opt.runs;
    config.train_fraction = opt.train_frac;
    config.list_lengths = opt.list_lengths;
    config.base_seed = opt.seed;
    config.threads = opt.threads;
    validate(config);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const auto dataset = load_snapshot(opt.out);
  if (std::ifstream info_in(fs::path(opt.out) / kIngestFile); info_in) {
    const auto info = nlohmann::json::parse(info_in, nullptr, false);
    if (info.is_object() && info.contains("rating_threshold")) {
      config.rating_threshold = info["rating_threshold"].get<double>();
    }
  }

  std::vector<MetricsReport> reports;
  for (const auto measure : measures) {
    config.measure = measure;
    std::cerr << "sweeping " << to_string(measure) << ": " << config.lambda_grid.size()
              << " lambda value(s) x " << config.runs << " run(s)\n";
    reports.push_back(run_experiment(dataset, config));
  }

  const auto cells_path = fs::path(opt.out) / (opt.format == "csv" ? "cells.csv" : "cells.json");
  {
    std::ofstream cells(cells_path);
    if (opt.format == "csv") {
      write_cells_csv(cells, reports);
    } else {
      write_cells_json(cells, reports);
    }
    if (!cells) throw CommandError("failed writing '" + cells_path.string() + "'");
  }
  const auto summary_path = fs::path(opt.out) / "summary.json";
  {
    std::ofstream summary(summary_path);
    write_summary_json(summary, reports, dataset_summary(dataset), config);
  }

  std::cout << "similarity\tmetric\tlambda\tvalue\n";
  for (const auto& r : reports) {
    const auto name = to_string(r.measure);
    if (r.best_rank_score) {
      std::cout << fmt::format("{}\trank_score\t{}\t{:.6g}\n", name, r.best_rank_score->lambda,
                               r.best_rank_score->value);
    }
    for (const auto& [len, o] : r.best_recall) {
      std::cout << fmt::format("{}\trecall@{}\t{}\t{:.6g}\n", name, len, o.lambda, o.value);
    }
    for (const auto& [len, o] : r.best_precision) {
      std::cout << fmt::format("{}\tprecision@{}\t{}\t{:.6g}\n", name, len, o.lambda, o.value);
    }
    for (const auto& cell : r.cells) {
      if (!cell.ok()) {
        std::cerr << fmt::format("warning: {} lambda={} run={}: {}\n", name, cell.lambda, cell.run,
                                 *cell.error);
      }
    }
  }
  std::cerr << "wrote " << cells_path.string() << " and " << summary_path.string() << '\n';
  return 0;
}

int cmd_recommend(const RecommendOptions& opt) {
  Measure measure{};
  try {
    measure = parse_measure(opt.similarity);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto dataset = load_snapshot(opt.out);
  const auto user = dataset.users().find(opt.user);
  if (!user) throw CommandError("unknown user id '" + opt.user + "'");

  SimilarityWorkspace ws;
  const auto object_row = similarity_row(measure, dataset.user_object(), *user, Channel::Object, ws);
  const auto tag_row = similarity_row(measure, dataset.user_tag(), *user, Channel::Tag, ws);
  const auto scores = score_objects(dataset, fuse(object_row, tag_row, opt.lambda));
  const auto list = top_l(scores, opt.list_length);
  if (list.entries.empty()) {
    std::cerr << "warning: no object has a positive score for user '" << opt.user << "'\n";
  }
  for (const auto& [object, score] : list.entries) {
    std::cout << dataset.objects().id(object) << '\t' << fmt::format("{:.17g}", score) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tag-aware collaborative filtering with diffusion-based user similarity"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse and core-filter logs into a snapshot");
  flag(ingest_cmd, "objects", ingest.objects, "Object-event file (user, object[, rating[, ts]])")
      ->required()->check(CLI::ExistingFile);
  flag(ingest_cmd, "tags", ingest.tags, "Tag-event file (user[, object], tag[, ts])")
      ->required()->check(CLI::ExistingFile);
  flag(ingest_cmd, "out", ingest.out, "Output directory")->required();
  flag(ingest_cmd, "rating-threshold", ingest.rating_threshold,
       "Drop object events rated below this value")->capture_default_str();
  ingest_cmd->add_flag("--keep-tag-case", ingest.keep_tag_case,
                       "Do not trim and lowercase tags")->envname("TRIDIFF_KEEP_TAG_CASE");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a lambda sweep over seeded splits");
  flag(sweep_cmd, "out", sweep.out, "Directory holding the snapshot; reports land here")
      ->required();
  flag(sweep_cmd, "similarity", sweep.similarity, "diffusion,cosine,jaccard")
      ->delimiter(',')->capture_default_str();
  flag(sweep_cmd, "lambda-min", sweep.lambda_min, "")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  flag(sweep_cmd, "lambda-max", sweep.lambda_max, "")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  flag(sweep_cmd, "lambda-step", sweep.lambda_step, "")->check(CLI::PositiveNumber)->capture_default_str();
  flag(sweep_cmd, "lambda", sweep.lambda, "Single lambda instead of a grid")->check(CLI::Range(0.0, 1.0));
  flag(sweep_cmd, "runs", sweep.runs, "Independent random splits")
      ->check(CLI::PositiveNumber)->capture_default_str();
  flag(sweep_cmd, "seed", sweep.seed, "Split seed of run 0; run i uses seed + i")->capture_default_str();
  flag(sweep_cmd, "train-frac", sweep.train_frac, "Fraction of user-object edges kept for training")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  flag(sweep_cmd, "L", sweep.list_lengths, "Recommendation list lengths")
      ->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
  flag(sweep_cmd, "format", sweep.format, "Per-cell output format")
      ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  flag(sweep_cmd, "threads", sweep.threads, "Worker threads (0 = all cores)")->capture_default_str();

  RecommendOptions rec;
  auto* rec_cmd = app.add_subcommand("recommend", "Print the top-L objects for one user");
  flag(rec_cmd, "out", rec.out, "Directory holding the snapshot")->required();
  flag(rec_cmd, "user", rec.user, "External user id")->required();
  flag(rec_cmd, "lambda", rec.lambda, "Weight of the user-object channel")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  flag(rec_cmd, "L", rec.list_length, "List length")->check(CLI::PositiveNumber)->capture_default_str();
  flag(rec_cmd, "similarity", rec.similarity, "diffusion, cosine or jaccard")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*rec_cmd) return cmd_recommend(rec);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
