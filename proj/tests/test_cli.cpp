#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "ris/cli_runner.hpp"
#include "ris/errors.hpp"

using namespace ris;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ris_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json report(const fs::path& dir) {
  std::ifstream is(dir / "report.json");
  return nlohmann::json::parse(is);
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ris");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config round trip") {
  cli::ExperimentConfig a;
  a.theta_r = 75;
  a.epsilon = "inactive";
  a.masks = "0:1:0.1:1e-4";
  a.mu0 = 2.5e-3;
  a.out = "some dir";
  std::stringstream ss;
  cli::dump_ini(ss, a);
  cli::ExperimentConfig b;
  CHECK_FALSE(cli::same(a, b));
  cli::load_ini(b, ss);
  CHECK(cli::same(a, b));
  CHECK(b.mu0 == a.mu0);
  CHECK(b.out == "some dir");

  cli::ExperimentConfig c;
  CHECK_THROWS_AS(cli::apply(c, "scenario.nope", "1"), Error);
  CHECK_THROWS_AS(cli::apply(c, "scenario.theta_r", "abc"), Error);
  CHECK_THROWS_AS(cli::apply(c, "solver.max_outer", "1.5"), Error);
  cli::apply(c, "scenario.theta_r", "75");
  CHECK(c.theta_r == 75);
  std::istringstream bad("[scenario]\nfoo = 3\n");
  CHECK_THROWS_AS(cli::load_ini(c, bad), Error);
}

TEST_CASE("mask parsing") {
  auto m = cli::parse_masks("0:1:0.1:1e-4; -5:5:0.5:2e-3");
  REQUIRE(m.size() == 2);
  CHECK(m[0].delta == 1e-4);
  CHECK(m[1].theta_l == doctest::Approx(-5 * 3.14159265358979 / 180));
  CHECK(cli::parse_masks("").empty());
  CHECK_THROWS_AS(cli::parse_masks("0:1:0.1"), Error);
  CHECK_THROWS_AS(cli::parse_masks("1:0:0.1:1"), Error);
  CHECK_THROWS_AS(cli::parse_masks("0:1:0.1:1:7"), Error);
}

TEST_CASE("go run and compare") {
  auto dir = scratch("go");
  std::ostringstream log;
  cli::ExperimentConfig cfg;
  cfg.out = dir.string();
  CHECK(cli::run(cfg, log) == cli::kOk);
  auto rep = report(dir);
  CHECK(rep["summary"]["receiver_db"].get<double>() == doctest::Approx(-7.871).epsilon(0.05 / 7.871));
  CHECK(rep["n"].get<int>() == 1493);
  CHECK(fs::exists(dir / "pattern.csv"));
  CHECK(fs::exists(dir / "profile.csv"));

  auto cmp = scratch("cmp");
  CHECK(cli::compare(dir.string(), dir.string(), cmp.string(), log) == cli::kOk);
  std::ifstream is(cmp / "compare.csv");
  std::string line;
  bool found = false;
  while (std::getline(is, line))
    if (line.rfind("receiver_flux_db,", 0) == 0) {
      CHECK(line.substr(line.rfind(',') + 1) == "0");
      found = true;
    }
  CHECK(found);

  // profile written by go feeds the pattern problem
  cli::ExperimentConfig pc;
  pc.kind = "pattern";
  pc.profile = (dir / "profile.csv").string();
  pc.out = scratch("pattern").string();
  CHECK(cli::run(pc, log) == cli::kOk);
  CHECK(report(pc.out)["summary"]["receiver_db"].get<double>() ==
        doctest::Approx(rep["summary"]["receiver_db"].get<double>()).epsilon(1e-9));

  auto other = scratch("go75");
  cfg.theta_r = 75;
  cfg.out = other.string();
  CHECK(cli::run(cfg, log) == cli::kOk);
  CHECK_THROWS_AS(cli::compare(dir.string(), other.string(), cmp.string(), log), Error);
}

TEST_CASE("floquet run") {
  auto dir = scratch("floquet");
  std::ostringstream log;
  cli::ExperimentConfig cfg;
  cfg.kind = "floquet";
  cfg.theta_r = 75;
  cfg.out = dir.string();
  CHECK(cli::run(cfg, log) == cli::kOk);
  auto modes = report(dir)["modes_deg"].get<std::vector<double>>();
  REQUIRE(modes.size() == 3);
  std::sort(modes.begin(), modes.end());
  CHECK(modes[0] == doctest::Approx(-75).epsilon(1e-9));
  CHECK(std::abs(modes[1]) < 1e-9);
  CHECK(modes[2] == doctest::Approx(75).epsilon(1e-9));
}

TEST_CASE("discrete and channel runs") {
  std::ostringstream log;
  cli::ExperimentConfig d;
  d.model = "discrete";
  d.cells_x = d.cells_y = 4;
  d.out = scratch("discrete").string();
  CHECK(cli::run(d, log) == cli::kOk);
  CHECK(fs::exists(fs::path(d.out) / "states.csv"));

  cli::ExperimentConfig c;
  c.model = "coupled";
  c.out = scratch("channel").string();
  CHECK(cli::run(c, log) == cli::kOk);
  CHECK(fs::exists(fs::path(c.out) / "report.json"));
}

TEST_CASE("exit codes") {
  auto dir = scratch("exit");
  CHECK(invoke({"go", "--theta-r", "abc"}) == cli::kConfigError);
  CHECK(invoke({"go", "--no-such-flag", "1"}) == cli::kConfigError);
  CHECK(invoke({"go", "--config", (dir / "missing.ini").string()}) == cli::kConfigError);
  CHECK(invoke({"run", "--model", "bogus", "--out", dir.string()}) == cli::kConfigError);
  CHECK(invoke({"floquet", "--theta-r", "30", "--out", dir.string()}) == cli::kOk);
  CHECK(invoke({"compare", dir.string(), (dir / "nothing").string()}) == cli::kConfigError);
}
