#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tridiff/evaluation.hpp"

using namespace tridiff;

namespace {

// Ten uncollected objects for user 0. Users 0 and 1 share tag 0 only, so the
// object channel is empty for user 0 while the tag channel links it to 1.
EvaluationSplit ten_objects(const std::vector<Edge>& extra_training, std::vector<Edge> tests) {
  std::vector<Edge> uo = {{0, 10}, {2, 10}};
  uo.insert(uo.end(), extra_training.begin(), extra_training.end());
  EvaluationSplit s;
  s.training = fixtures::tagged(uo, 3, 11, {{0, 0}, {1, 0}, {2, 1}}, 2);
  s.test_edges = std::move(tests);
  return s;
}

synthetic::FolksonomySpec small_spec() {
  synthetic::FolksonomySpec spec;
  spec.users = 150;
  spec.objects = 220;
  spec.tags = 90;
  spec.seed = 77;
  return spec;
}

}  // namespace

TEST_CASE("relative rank: third of a hundred") {
  const auto split = fixtures::third_of_hundred();
  const auto ranks = rank_of_test_pairs(split, Measure::Diffusion, 1.0);
  REQUIRE(ranks.size() == 1);
  CHECK(ranks[0].uncollected == 100);
  CHECK(ranks[0].midrank == 3.0);
  CHECK(ranks[0].relative == 0.03);
}

TEST_CASE("relative rank: unique top of ten") {
  // User 1 holds object 4 only; at lambda = 0 user 0 inherits it via the tag.
  const auto split = ten_objects({{1, 4}}, {{0, 4}});
  const auto ranks = rank_of_test_pairs(split, Measure::Diffusion, 0.0);
  REQUIRE(ranks.size() == 1);
  CHECK(ranks[0].uncollected == 10);
  CHECK(ranks[0].relative == 0.1);
}

TEST_CASE("relative rank: all-zero block takes the midrank") {
  const auto split = ten_objects({}, {{0, 2}, {0, 7}});
  const auto ranks = rank_of_test_pairs(split, Measure::Diffusion, 1.0);
  REQUIRE(ranks.size() == 2);
  const std::vector<double> zeros(10, 0.0);
  const double expected = oracle::enumerated_expected_position(zeros, 2);
  CHECK(expected == 5.5);
  for (const auto& r : ranks) {
    CHECK(r.midrank == expected);
    CHECK(r.relative == 0.55);
  }
}

TEST_CASE("midrank equals the mean position over tie orderings") {
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 6, n = 8, r = 4;
    const auto uo = synthetic::random_edges(rng, m, n, 0.3);
    const auto ut = synthetic::random_edges(rng, m, r, 0.4);
    EvaluationSplit s;
    s.training = fixtures::tagged(uo, m, n, ut, r);
    const auto adj_uo = oracle::dense_adjacency(uo, m, n);
    for (Index u = 0; u < m; ++u) {
      for (Index a = 0; a < n; ++a) {
        if (!adj_uo[u][a]) s.test_edges.emplace_back(u, a);
      }
    }
    if (s.test_edges.empty()) continue;
    const double lambda = 0.3;
    const auto ranks = rank_of_test_pairs(s, Measure::Diffusion, lambda);

    // Exact rational scores; tie classes are then compared as small integers.
    const auto so = oracle::exact_diffusion(adj_uo);
    const auto st = oracle::exact_diffusion(oracle::dense_adjacency(ut, m, r));
    const oracle::Rational w_obj(3, 10), w_tag(7, 10);
    for (const auto& rp : ranks) {
      const auto [v, target] = rp.pair;
      std::vector<oracle::Rational> exact(n);
      for (Index u = 0; u < m; ++u) {
        if (u == v) continue;
        const auto sim = w_obj * so[u][v] + w_tag * st[u][v];
        for (Index a = 0; a < n; ++a) {
          if (adj_uo[u][a]) exact[a] = exact[a] + sim;
        }
      }
      std::vector<oracle::Rational> uncollected;
      std::size_t target_pos = 0;
      for (Index a = 0; a < n; ++a) {
        if (adj_uo[v][a]) continue;
        if (a == target) target_pos = uncollected.size();
        uncollected.push_back(exact[a]);
      }
      std::vector<double> pool;
      for (const auto& x : uncollected) {
        pool.push_back(static_cast<double>(std::count_if(
            uncollected.begin(), uncollected.end(), [&](const auto& y) { return y < x; })));
      }
      CHECK(rp.uncollected == pool.size());
      CHECK(rp.midrank == oracle::enumerated_expected_position(pool, target_pos));
      CHECK(rp.relative > 0.0);
      CHECK(rp.relative <= 1.0);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("raising a test object above one more competitor lowers RankS") {
  // Object 4 (test) is held by user 1, object 5 by users 1 and 2; user 0
  // reaches both via the shared tag.
  const std::vector<Edge> ut = {{0, 0}, {1, 0}, {2, 0}};
  EvaluationSplit before;
  before.training = fixtures::tagged({{0, 10}, {1, 4}, {1, 5}, {2, 5}}, 3, 11, ut, 1);
  before.test_edges = {{0, 4}};
  EvaluationSplit after = before;
  after.training = fixtures::tagged({{0, 10}, {1, 4}, {1, 5}, {2, 5}, {2, 4}, {2, 3}}, 3, 11, ut, 1);
  // User 2 now also holds object 4, lifting it level with object 5.
  const double r_before = ranking_score(rank_of_test_pairs(before, Measure::Diffusion, 0.0));
  const double r_after = ranking_score(rank_of_test_pairs(after, Measure::Diffusion, 0.0));
  CHECK(r_before == 0.2);   // second of ten
  CHECK(r_after == 0.15);   // tied for first with object 5: midrank 1.5
  CHECK(r_after < r_before);
}

TEST_CASE("ranking_score") {
  const std::vector<double> one = {0.03};
  const std::vector<double> two = {0.1, 0.3};
  CHECK(ranking_score(one) == 0.03);
  CHECK(ranking_score(two) == 0.2);
  CHECK_THROWS_AS(ranking_score(std::vector<double>{}), UndefinedMetricError);
}

TEST_CASE("recall and precision") {
  SUBCASE("perfect recall") {
    const auto split = ten_objects({{1, 4}, {1, 6}}, {{0, 4}, {0, 6}});
    const auto rp = recall_precision_at(split, Measure::Diffusion, 0.0, 2);
    CHECK(rp.hits == 2);
    CHECK(rp.recall == 1.0);
    CHECK(rp.precision == 2.0 / (3.0 * 2.0));
  }
  SUBCASE("no hits") {
    const auto split = ten_objects({{1, 4}}, {{0, 6}, {2, 3}});
    const auto rp = recall_precision_at(split, Measure::Diffusion, 0.0, 5);
    CHECK(rp.hits == 0);
    CHECK(rp.recall == 0.0);
    CHECK(rp.precision == 0.0);
  }
  SUBCASE("errors") {
    const auto split = ten_objects({}, {});
    CHECK_THROWS_AS(recall_precision_at(split, Measure::Diffusion, 0.5, 10), UndefinedMetricError);
    CHECK_THROWS_AS(recall_precision_at(ten_objects({}, {{0, 1}}), Measure::Cosine, 0.5, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("lambda grid") {
  const auto grid = make_lambda_grid(0.0, 1.0, 0.02);
  REQUIRE(grid.size() == 51);
  CHECK(grid.front() == 0.0);
  CHECK(grid[3] == 0.06);
  CHECK(grid[37] == 0.74);
  CHECK(grid.back() == 1.0);
  CHECK(make_lambda_grid(0.5, 0.5, 0.1) == std::vector<double>{0.5});
  CHECK_THROWS_AS(make_lambda_grid(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lambda_grid(0.6, 0.4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_lambda_grid(0.0, 1.2, 0.1), std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(validate(c));
  auto bad = c;
  bad.runs = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = c;
  bad.lambda_grid = {0.5, 0.2};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = c;
  bad.lambda_grid = {0.2, 0.2};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = c;
  bad.list_lengths = {10, 0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = c;
  bad.train_fraction = 0.0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("run_experiment") {
  const auto ds = synthetic::folksonomy_dataset(small_spec());
  REQUIRE(ds.user_count() > 50);

  ExperimentConfig config;
  config.lambda_grid = make_lambda_grid(0.0, 1.0, 0.25);
  config.runs = 2;
  config.threads = 1;
  const auto report = run_experiment(ds, config);
  REQUIRE(report.cells.size() == 10);
  REQUIRE(report.means.size() == 5);

  SUBCASE("cells agree with the standalone metric functions") {
    for (const auto& cell : report.cells) {
      REQUIRE(cell.ok());
      const auto sp = split(ds, config.train_fraction, cell.seed);
      CHECK(cell.test_count == sp.test_count());
      CHECK(cell.rank_score == ranking_score(rank_of_test_pairs(sp, Measure::Diffusion, cell.lambda)));
      for (auto len : config.list_lengths) {
        const auto rp = recall_precision_at(sp, Measure::Diffusion, cell.lambda, len);
        CHECK(cell.hits.at(len) == rp.hits);
        CHECK(cell.recall.at(len) == rp.recall);
        CHECK(cell.precision.at(len) == rp.precision);
      }
    }
  }
  SUBCASE("N_p follows the rounding rule") {
    const auto e = ds.user_object().edge_count();
    for (const auto& cell : report.cells) {
      CHECK(cell.test_count ==
            e - static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(e))));
      CHECK(cell.user_count == ds.user_count());
    }
  }
  SUBCASE("thread count does not change results") {
    auto threaded = config;
    threaded.threads = 4;
    const auto other = run_experiment(ds, threaded);
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
      CHECK(other.cells[i].rank_score == report.cells[i].rank_score);
      CHECK(other.cells[i].hits == report.cells[i].hits);
    }
  }
  SUBCASE("means and optima") {
    const auto& m = report.means[1];
    CHECK(m.valid_runs == 2);
    CHECK(m.rank_score == (report.cells[2].rank_score + report.cells[3].rank_score) / 2.0);
    REQUIRE(report.best_rank_score.has_value());
    for (const auto& mean : report.means) CHECK(report.best_rank_score->value <= mean.rank_score);
    for (const auto& [len, best] : report.best_recall) {
      for (const auto& mean : report.means) CHECK(best.value >= mean.recall.at(len));
    }
    const auto* at_one = report.mean_at(1.0);
    REQUIRE(at_one != nullptr);
    CHECK(*report.rank_score_improvement() ==
          (at_one->rank_score - report.best_rank_score->value) / at_one->rank_score);
  }
}

TEST_CASE("single-channel modes match the fused endpoints") {
  const auto ds = synthetic::folksonomy_dataset(small_spec());
  ExperimentConfig fused;
  fused.lambda_grid = {0.0, 1.0};
  fused.runs = 2;
  fused.measure = Measure::Cosine;
  const auto sweep = run_experiment(ds, fused);

  auto object_only = fused;
  object_only.channels = ChannelMode::ObjectOnly;
  auto tag_only = fused;
  tag_only.channels = ChannelMode::TagOnly;
  const auto obj = run_experiment(ds, object_only);
  const auto tag = run_experiment(ds, tag_only);
  REQUIRE(obj.cells.size() == 2);
  for (std::size_t run = 0; run < 2; ++run) {
    const auto& at0 = sweep.cells[run];
    const auto& at1 = sweep.cells[2 + run];
    CHECK(at1.rank_score == obj.cells[run].rank_score);
    CHECK(at1.recall == obj.cells[run].recall);
    CHECK(at0.rank_score == tag.cells[run].rank_score);
    CHECK(at0.precision == tag.cells[run].precision);
  }
}

TEST_CASE("undefined cells carry an error instead of aborting") {
  const auto ds = synthetic::folksonomy_dataset(small_spec());
  ExperimentConfig config;
  config.lambda_grid = {0.5};
  config.runs = 2;
  config.train_fraction = 1.0;
  const auto report = run_experiment(ds, config);
  REQUIRE(report.cells.size() == 2);
  for (const auto& cell : report.cells) {
    CHECK_FALSE(cell.ok());
    CHECK(std::isnan(cell.rank_score));
  }
  CHECK(report.means.empty());
  CHECK_FALSE(report.best_rank_score.has_value());
}
