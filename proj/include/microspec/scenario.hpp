#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "microspec/acs.hpp"
#include "microspec/wavefront.hpp"

namespace microspec {

inline constexpr const char* kVersion = "microspec 1.0.0";

/// Flat dotted key = value configuration; '#' starts a comment.
struct ScenarioConfig {
  std::map<std::string, std::string> values;
  std::string origin;
};

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin = "<text>");
ScenarioConfig load_scenario(const std::string& path);
/// "key=value"; the key must belong to the schema.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);
/// Known keys with their defaults ("" = required or unset).
const std::map<std::string, std::string>& scenario_schema();

struct Scenario {
  std::string name;
  std::string distribution;
  bool acs = false;
  std::vector<EstimatorKind> estimators;
  std::vector<Point> xs;
  std::vector<std::vector<Point>> x_tuples;
  EstimatorSettings settings;
  std::set<std::string> checks;
  std::map<std::string, std::string> params;  // check parameters and acs options
  std::string out_dir;
  std::uint64_t seed = 7;
  int threads = 0;
  std::string digest;
};

/// Validates against the schema; ConfigError names the offending key.
Scenario build_scenario(const ScenarioConfig& cfg);

struct CheckOutcome {
  CheckOutcome() = default;
  explicit CheckOutcome(std::string n) : name(std::move(n)) {}
  std::string name;
  bool pass = true;
  std::map<std::string, double> numbers;
  std::vector<std::string> notes;
};

struct ScenarioResult {
  std::vector<WavefrontEstimate> wf;
  std::optional<AcsEstimate> acs;
  std::vector<CheckOutcome> checks;
  bool pass() const;
  int exit_code() const { return pass() ? 0 : 2; }
};

ScenarioResult execute_scenario(const Scenario& sc);
/// decay.csv, summary.json and (dimension permitting) wf_map.svg.
void emit_report(const Scenario& sc, const ScenarioResult& res, const std::string& dir);

struct RunOptions {
  std::string out_dir;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

/// 0: all checks pass, 2: a check failed, 1: execution or configuration error.
int run_scenario(const std::string& path, const RunOptions& opt, std::ostream& log);
int run_scenario_config(ScenarioConfig cfg, const RunOptions& opt, std::ostream& log);

/// Built-in scenarios with their expected exit codes.
struct BundledScenario {
  std::string name;
  std::string text;
  int expected_exit;
};
const std::vector<BundledScenario>& self_test_scenarios();
int self_test(const std::string& out_root, std::ostream& log);

std::string fnv1a_hex(const std::string& s);

}  // namespace microspec
