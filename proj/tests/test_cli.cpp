#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <doctest.h>

#include "oschalf/cli.hpp"
#include "oschalf/report.hpp"

using namespace oschalf;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "oschalf_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("doubles keep 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("json dump keeps insertion order and nulls non-finite values") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = std::nan("");
  j["list"] = Json::array({0.5, true, "x"});
  j["empty"] = Json::object();
  const std::string s = dump_json(j);
  CHECK(s ==
        "{\n  \"zeta\": 1,\n  \"alpha\": null,\n  \"list\": [\n    0.5,\n    true,\n    \"x\"\n  ],\n"
        "  \"empty\": {}\n}\n");
  CHECK(Json::parse(s)["alpha"].is_null());
}

TEST_CASE("csv has a header row") {
  const CsvTable t{{"radius", "value"}, {{0.0, 1.0}, {0.5, 0.25}}};
  CHECK(to_csv(t) == "radius,value\n0,1\n0.5,0.25\n");
}

TEST_CASE("atomic write replaces the target and leaves no temporary") {
  const auto path = scratch_dir() / "atomic.txt";
  write_atomic(path, "first");
  write_atomic(path, "second");
  CHECK(slurp(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  CHECK_THROWS_AS(write_atomic(scratch_dir() / "missing" / "x.txt", "x"), IoError);
}

TEST_CASE("scan run writes byte-identical versioned json") {
  RunConfig cfg;
  cfg.command = "extremal-scan";
  cfg.out = (scratch_dir() / "scan.json").string();
  CHECK(run(cfg) == kExitPass);
  const std::string first = slurp(cfg.out);
  CHECK(run(cfg) == kExitPass);
  CHECK(slurp(cfg.out) == first);
  const Json j = Json::parse(first);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["config"]["dim"] == 2);
  CHECK(j["passed"] == true);
}

TEST_CASE("csv profile has a monotone radius column") {
  RunConfig cfg;
  cfg.command = "decay";
  cfg.max_degree = 8;
  cfg.inner_radius = 1.0;
  cfg.format = "csv";
  cfg.out = (scratch_dir() / "decay.csv").string();
  run(cfg);
  std::istringstream in(slurp(cfg.out));
  std::string line;
  std::getline(in, line);
  CHECK(line == "radius,weighted_max");
  double prev = -1.0;
  int rows = 0;
  while (std::getline(in, line)) {
    const double r = std::stod(line.substr(0, line.find(',')));
    CHECK(r > prev);
    prev = r;
    ++rows;
  }
  CHECK(rows > 2);
  const Json report = Json::parse(slurp(scratch_dir() / "decay.json"));
  CHECK(report["schema_version"] == kSchemaVersion);
  CHECK(report["config"]["inner_radius"] == 1.0);
}

TEST_CASE("supercritical solve exits with a check failure") {
  RunConfig cfg;
  cfg.command = "solve";
  cfg.power = 5.0;
  cfg.max_degree = 8;
  cfg.out = (scratch_dir() / "refused.json").string();
  CHECK(run(cfg) == kExitCheckFailed);
  const Json j = Json::parse(slurp(cfg.out));
  CHECK(j["result"]["status"] == "refused");
  CHECK(j["checks"][0]["value"].get<std::string>().find("nonexistence") != std::string::npos);
}

TEST_CASE("usage errors") {
  RunConfig cfg;
  cfg.command = "frobnicate";
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  cfg.command = "solve";
  cfg.format = "xml";
  CHECK_THROWS_AS(run(cfg), std::invalid_argument);
  const char* argv[] = {"oschalf", "nope"};
  CHECK(main_entry(2, const_cast<char**>(argv)) == kExitUsage);
}

TEST_CASE("config file values yield to flags") {
  const auto cfg_path = scratch_dir() / "run.cfg";
  {
    std::ofstream f(cfg_path);
    f << "# test config\nK = 6\nseed = 9\n";
  }
  const auto out = (scratch_dir() / "cfg.json").string();
  const std::string cfg_arg = cfg_path.string();
  const char* argv[] = {"oschalf", "solve", "--config", cfg_arg.c_str(), "--K", "5", "--out", out.c_str()};
  main_entry(8, const_cast<char**>(argv));
  const Json j = Json::parse(slurp(out));
  CHECK(j["config"]["K"] == 5);
  CHECK(j["config"]["seed"] == 9);
}
