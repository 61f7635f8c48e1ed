#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/scenario.hpp"

using namespace microspec;
namespace fs = std::filesystem;

namespace {

const char* kDelta =
    "name = t-delta\n"
    "distribution = delta@0   # point mass\n"
    "estimator = classical\n"
    "ladder.count = 12\n"
    "lattice.points = 3\n"
    "checks = ground_truth,conicity\n";

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("configuration errors name the key") {
  try {
    parse_scenario_text("name = x\nbogus.key = 1\n");
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("bogus.key") != std::string::npos);
  }
  try {
    build_scenario(parse_scenario_text("name = x\ndistribution = delta@0\n"));
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("ladder") != std::string::npos);
  }
  auto cfg = parse_scenario_text(kDelta);
  apply_override(cfg, "ladder.ratio=2");
  CHECK(error_code_of([&] { build_scenario(cfg); }) == ErrorCode::ConfigError);
  cfg = parse_scenario_text(kDelta);
  apply_override(cfg, "checks=nothing");
  CHECK(error_code_of([&] { build_scenario(cfg); }) == ErrorCode::ConfigError);
  CHECK(error_code_of([&] { apply_override(cfg, "nope=1"); }) == ErrorCode::ConfigError);
}

TEST_CASE("digest depends on the numbers, not on the output location") {
  auto a = parse_scenario_text(kDelta);
  auto b = a;
  apply_override(b, "output.dir=/tmp/elsewhere");
  apply_override(b, "threads=2");
  CHECK(build_scenario(a).digest == build_scenario(b).digest);
  apply_override(b, "seed=8");
  CHECK(build_scenario(a).digest != build_scenario(b).digest);
}

TEST_CASE("run writes reports and is reproducible") {
  const fs::path root = fs::temp_directory_path() / "microspec-unit-scenario";
  fs::remove_all(root);
  std::ostringstream log;
  RunOptions o;
  o.out_dir = (root / "a").string();
  CHECK(run_scenario_config(parse_scenario_text(kDelta), o, log) == 0);
  o.out_dir = (root / "b").string();
  o.threads = 2;
  CHECK(run_scenario_config(parse_scenario_text(kDelta), o, log) == 0);
  for (const char* f : {"decay.csv", "summary.json", "wf_map.svg"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(root / "a" / f));
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
  const auto j = nlohmann::json::parse(slurp(root / "a" / "summary.json"));
  CHECK(j["status"] == "pass");
  CHECK(j["estimates"][0]["counts"]["Singular"].get<int>() == 6);
  CHECK(j["checks"]["ground_truth"]["pass"] == true);
  fs::remove_all(root);
}

TEST_CASE("exit codes") {
  std::ostringstream log;
  RunOptions o;
  o.out_dir = (fs::temp_directory_path() / "microspec-unit-exit").string();
  CHECK(run_scenario_config(parse_scenario_text("name = m\ndistribution = delta@0\n"), o, log) == 1);
  CHECK(run_scenario("/nonexistent/file.cfg", o, log) == 1);
  auto cfg = parse_scenario_text(kDelta);
  apply_override(cfg, "distribution=heaviside@0");
  apply_override(cfg, "checks.ground_truth.max_indeterminate=-1");
  CHECK(run_scenario_config(cfg, o, log) == 2);
  fs::remove_all(o.out_dir);
}
