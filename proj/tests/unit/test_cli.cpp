#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/synthetic.hpp"
#include "tridiff/report_io.hpp"

namespace fs = std::filesystem;
using namespace tridiff;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(TRIDIFF_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(TRIDIFF_CLI_PATH) + " " + args + " >" + out.string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// F2: u1-o1, u1-o2, u2-o1, u3-o2, u2-o3; u1 shares tag t1 with u3, u2 has t2.
void write_f2_snapshot(const fs::path& dir) {
  const auto ds = fixtures::tagged({{0, 0}, {0, 1}, {1, 0}, {2, 1}, {1, 2}}, 3, 3,
                                   {{0, 0}, {2, 0}, {1, 1}}, 2);
  std::ofstream out(dir / "dataset.snapshot");
  write_snapshot(out, ds);
}

}  // namespace

TEST_CASE("cli ingest") {
  const auto dir = scratch("ingest");
  SUBCASE("minimal passing fixture") {
    write_file(dir / "obj.tsv", "1\t10\t5\n2\t10\t3\n");
    write_file(dir / "tag.tsv", "1\t10\tNoir\n2\t10\tnoir \n");
    const auto r = run_cli("ingest --objects " + (dir / "obj.tsv").string() + " --tags " +
                               (dir / "tag.tsv").string() + " --out " + (dir / "data").string(),
                           dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "users\t2\nobjects\t1\ntags\t1\nuser_object_edges\t2\nuser_tag_edges\t2\n");
    CHECK(fs::exists(dir / "data" / "dataset.snapshot"));
    CHECK(fs::exists(dir / "data" / "ingest.json"));
  }
  SUBCASE("rating threshold from the environment") {
    write_file(dir / "obj.tsv", "1\t10\t5\n2\t10\t3\n");
    write_file(dir / "tag.tsv", "1\t10\tx\n2\t10\tx\n");
    const auto r = run_cli("ingest --objects " + (dir / "obj.tsv").string() + " --tags " +
                               (dir / "tag.tsv").string() + " --out " + (dir / "data").string(),
                           dir);
    CHECK(r.exit_code == 0);
    ::setenv("TRIDIFF_RATING_THRESHOLD", "4", 1);
    const auto strict = run_cli("ingest --objects " + (dir / "obj.tsv").string() + " --tags " +
                                    (dir / "tag.tsv").string() + " --out " + (dir / "data2").string(),
                                dir);
    ::unsetenv("TRIDIFF_RATING_THRESHOLD");
    CHECK(strict.exit_code == 1);
  }
  SUBCASE("sub-threshold fixture fails with an explanation") {
    write_file(dir / "obj.tsv", "1\t10\n");
    write_file(dir / "tag.tsv", "1\t10\tx\n");
    const auto r = run_cli("ingest --objects " + (dir / "obj.tsv").string() + " --tags " +
                               (dir / "tag.tsv").string() + " --out " + (dir / "data").string(),
                           dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("empty after filtering") != std::string::npos);
  }
  SUBCASE("missing input file") {
    const auto r = run_cli("ingest --objects " + (dir / "nope.tsv").string() + " --tags " +
                               (dir / "nope.tsv").string() + " --out " + (dir / "data").string(),
                           dir);
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("nope.tsv") != std::string::npos);
  }
}

TEST_CASE("cli sweep") {
  const auto dir = scratch("sweep");
  synthetic::FolksonomySpec spec;
  spec.users = 120;
  spec.objects = 160;
  spec.tags = 60;
  {
    std::ofstream out(dir / "dataset.snapshot");
    write_snapshot(out, synthetic::folksonomy_dataset(spec));
  }
  const std::string base = "sweep --out " + dir.string();

  SUBCASE("single lambda, single run") {
    const auto r = run_cli(base + " --lambda 1.0 --runs 1 --similarity diffusion", dir);
    CHECK(r.exit_code == 0);
    const auto csv = slurp(dir / "cells.csv");
    CHECK(count_lines(csv) == 2);
    CHECK(csv.find("\ndiffusion,1,0,") != std::string::npos);
    CHECK(fs::exists(dir / "summary.json"));
  }
  SUBCASE("reruns are byte-identical") {
    const std::string args = base + " --similarity diffusion,cosine --lambda-step 0.25 --runs 2 --L 5,10";
    REQUIRE(run_cli(args, dir).exit_code == 0);
    const auto first = slurp(dir / "cells.csv");
    REQUIRE(run_cli(args + " --threads 3", dir).exit_code == 0);
    CHECK(slurp(dir / "cells.csv") == first);
    CHECK(count_lines(first) == 1 + 2 * 5 * 2);
    CHECK(first.rfind("similarity,lambda,run,rank_score,recall@5,recall@10,precision@5,precision@10\n", 0) == 0);
  }
  SUBCASE("json cells") {
    CHECK(run_cli(base + " --lambda 0.5 --runs 1 --format json", dir).exit_code == 0);
    CHECK(fs::exists(dir / "cells.json"));
  }
  SUBCASE("invalid configurations are usage errors") {
    CHECK(run_cli(base + " --lambda-min 0.8 --lambda-max 0.2", dir).exit_code == 2);
    CHECK(run_cli(base + " --similarity pearson", dir).exit_code == 2);
    CHECK(run_cli(base + " --runs 0", dir).exit_code == 2);
    CHECK(run_cli(base + " --format xml", dir).exit_code == 2);
    CHECK(run_cli(base + " --L 0", dir).exit_code == 2);
  }
  SUBCASE("missing snapshot") {
    const auto empty = scratch("sweep-empty");
    const auto r = run_cli("sweep --out " + empty.string(), empty);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("ingest") != std::string::npos);
  }
}

TEST_CASE("cli recommend on F2") {
  const auto dir = scratch("recommend");
  write_f2_snapshot(dir);
  const std::string base = "recommend --out " + dir.string() + " --user u1 --L 10";

  const auto object_only = run_cli(base + " --lambda 1", dir);
  CHECK(object_only.exit_code == 0);
  CHECK(object_only.out == "o3\t0.25\n");

  // Through the tag channel u1 only reaches u3, whose object u1 already holds.
  const auto tag_only = run_cli(base + " --lambda 0", dir);
  CHECK(tag_only.exit_code == 0);
  CHECK(tag_only.out.empty());
  CHECK(tag_only.err.find("warning") != std::string::npos);
  CHECK(tag_only.out != object_only.out);

  const auto unknown = run_cli("recommend --out " + dir.string() + " --user u99", dir);
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.err.find("u99") != std::string::npos);
}
