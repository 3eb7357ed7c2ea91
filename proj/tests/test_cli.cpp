#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swarmengage/cli.hpp"
#include "test_paths.hpp"

using namespace swarmengage;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "swarmengage");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("swarmengage_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const std::string kScenario2d = std::string(kScenarioDir) + "/scenario_2d.json";

}  // namespace

TEST_CASE("validate the bundled 2D scenario") {
  auto r = cli({"validate", "--config", kScenario2d});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("m=64\n") != std::string::npos);
  CHECK(r.out.find("layers=") != std::string::npos);
  CHECK(r.out.find("strong_connectivity=OK") != std::string::npos);
}

TEST_CASE("validate echoes a config that round-trips") {
  auto dir = scratch("roundtrip");
  REQUIRE(cli({"validate", "--config", kScenario2d, "--out", dir.string()}).code == kExitOk);
  auto resolved = dir / "config_resolved.json";
  auto a = cli({"run", "--config", kScenario2d, "--out", (dir / "a").string()});
  auto b = cli({"run", "--config", resolved.string(), "--out", (dir / "b").string()});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  CHECK(slurp(dir / "a" / "run.csv") == slurp(dir / "b" / "run.csv"));
}

TEST_CASE("plan reports a ratio under the target") {
  auto r = cli({"plan", "--config", kScenario2d});
  REQUIRE(r.code == kExitOk);
  auto at = r.out.find("ratio=");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(r.out.substr(at + 6)) < 0.1);
}

TEST_CASE("run writes the documented files") {
  auto dir = scratch("files");
  auto r = cli({"run", "--config", kScenario2d, "--seed", "4", "--option", "replan",
                "--heatmaps", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  for (const char* f : {"summary.json", "run.csv", "timeline.csv", "config_resolved.json"})
    CHECK(fs::exists(dir / f));
  CHECK(fs::exists(dir / "heatmaps" / "blue_0000.ppm"));
  std::ifstream csv(dir / "run.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "step,bin,s_b,s_r,eliminated,entered_cum");
  CHECK(slurp(dir / "summary.json").find("\"option\": \"replan\"") != std::string::npos);
  CHECK(slurp(dir / "summary.json").find("\"seed\": 4") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(cli({"run", "--config", kScenario2d, "--bogus"}).code == kExitConfigError);
  CHECK(cli({"run"}).code == kExitConfigError);
  CHECK(cli({}).code == kExitConfigError);
  CHECK(cli({"run", "--config", kScenario2d, "--option", "hold"}).code == kExitConfigError);
  CHECK(cli({"validate", "--config", "/nonexistent/scenario.json"}).code == kExitConfigError);

  auto dir = scratch("codes");
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"grid": {"dims": [4, 4], "base": {"min": [0, 0], "max": [0, 0]}}, "extra": 1})";
  }
  CHECK(cli({"validate", "--config", (dir / "bad.json").string()}).code == kExitConfigError);
  {
    // column 2 is a wall, so the right half can never reach the base
    std::ofstream f(dir / "split.json");
    f << R"({"grid": {"dims": [4, 4], "obstacles": [{"min": [0, 2], "max": [3, 2]}],
             "base": {"min": [0, 0], "max": [0, 0]}},
             "red": {"count": 5, "init": {"min": [3, 3], "max": [3, 3]}},
             "blue": {"count": 5, "init": "base"}})";
  }
  CHECK(cli({"validate", "--config", (dir / "split.json").string()}).code == kExitInfeasible);
}

TEST_CASE("ensemble writes one directory per seed") {
  auto dir = scratch("ensemble");
  auto r = cli({"ensemble", "--config", kScenario2d, "--runs", "3", "--threads", "2", "--out",
                dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "run_0002" / "summary.json"));
  CHECK(fs::exists(dir / "ensemble.json"));
}
