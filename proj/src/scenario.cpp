#include "microspec/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace microspec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigError, what + ": " + key);
}

double num(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  config_error(key, "not a number (" + v + ")");
}

int integer(const std::string& key, const std::string& v) {
  const double d = num(key, v);
  if (d != std::floor(d)) config_error(key, "not an integer (" + v + ")");
  return static_cast<int>(d);
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(key, "not a boolean (" + v + ")");
}

Point point(const std::string& key, const std::string& v) {
  const auto parts = split_on(v, ',');
  Point p(static_cast<int>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) p[static_cast<int>(i)] = num(key, parts[i]);
  return p;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string coords(const Point& p) {
  std::string s;
  for (int i = 0; i < p.dim; ++i) s += (i ? ";" : "") + fmt(p[i]);
  return s;
}

json to_json(const Point& p) {
  json a = json::array();
  for (int i = 0; i < p.dim; ++i) a.push_back(p[i]);
  return a;
}

const std::set<std::string>& known_checks() {
  static const std::set<std::string> k{"ground_truth", "conicity",  "reflection", "agreement",  "robustness",
                                       "covariance",   "probes",    "lemma",      "cone",       "hermitean",
                                       "salient",      "inclusion", "diagonal",   "subadditivity"};
  return k;
}

}  // namespace

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::map<std::string, std::string>& scenario_schema() {
  static const std::map<std::string, std::string> schema{
      {"name", ""},
      {"distribution", ""},
      {"estimator", "classical"},
      {"ladder.lambda_max", "0.25"},
      {"ladder.ratio", "0.7071067811865476"},
      {"ladder.count", "12"},
      {"lattice.points", "9"},
      {"lattice.spacing", "2.5"},
      {"lattice.x", ""},
      {"directions.count", ""},
      {"directions.cap_radius", "0.1"},
      {"directions.cap_samples", "5"},
      {"window.radius", "2"},
      {"families.p_grid", "1,1.5,2,3"},
      {"decay.n_rapid", "5"},
      {"decay.n_sing", "1.5"},
      {"decay.floor", "1e-11"},
      {"conic.recompute", "false"},
      {"acs.x_tuples", ""},
      {"acs.locality", "true"},
      {"checks", ""},
      {"checks.cone.tol", ""},
      {"checks.cone.plant", ""},
      {"checks.covariance.shift", ""},
      {"checks.diagonal.expect", "singular"},
      {"checks.subadditivity.with", ""},
      {"checks.robustness.multipliers", "cos,quadratic"},
      {"checks.probes.count", "16"},
      {"checks.agreement.max_rate", "0.05"},
      {"checks.ground_truth.max_indeterminate", "0.1"},
      {"output.dir", ""},
      {"seed", "7"},
      {"threads", "0"},
  };
  return schema;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  cfg.origin = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!scenario_schema().count(key)) config_error(key, "unknown key");
    cfg.values[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot read scenario file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "override must be key=value: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  if (!scenario_schema().count(key)) config_error(key, "unknown key");
  cfg.values[key] = trim(assignment.substr(eq + 1));
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  for (const char* req : {"name", "distribution"})
    if (!cfg.values.count(req) || cfg.values.at(req).empty()) config_error(req, "missing required key");
  const bool has_ladder = std::any_of(cfg.values.begin(), cfg.values.end(),
                                      [](const auto& kv) { return kv.first.rfind("ladder.", 0) == 0; });
  if (!has_ladder) config_error("ladder", "missing required key");

  std::map<std::string, std::string> v = scenario_schema();
  for (const auto& [k, val] : cfg.values) v[k] = val;

  Scenario sc;
  sc.name = v["name"];
  sc.distribution = v["distribution"];
  Distribution u = [&] {
    try {
      return parse_catalog_key(sc.distribution);
    } catch (const Error& e) {
      config_error("distribution", std::string("unknown catalog key (") + e.what() + ")");
    }
  }();

  const std::string est = v["estimator"];
  if (est == "acs") {
    sc.acs = true;
  } else if (est == "all") {
    sc.estimators = {EstimatorKind::Classical, EstimatorKind::ScalingFamilies, EstimatorKind::SingleFamily};
  } else {
    for (const auto& e : split_on(est, ',')) {
      if (e == "classical") sc.estimators.push_back(EstimatorKind::Classical);
      else if (e == "scaling") sc.estimators.push_back(EstimatorKind::ScalingFamilies);
      else if (e == "singlefamily") sc.estimators.push_back(EstimatorKind::SingleFamily);
      else config_error("estimator", "unknown estimator (" + e + ")");
    }
  }

  EstimatorSettings& s = sc.settings;
  try {
    s.ladder = make_ladder(num("ladder.lambda_max", v["ladder.lambda_max"]), num("ladder.ratio", v["ladder.ratio"]),
                           integer("ladder.count", v["ladder.count"]));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error("ladder", std::string("invalid ladder (") + e.what() + ")");
  }
  const double cap = num("directions.cap_radius", v["directions.cap_radius"]);
  const int cap_samples = integer("directions.cap_samples", v["directions.cap_samples"]);
  const auto* kern = u.as<TranslationKernel>();
  if (sc.acs) {
    if (!kern) config_error("distribution", "estimator acs needs a kernel");
    s.dirs = acs_direction_set(kern->n, kern->d, cap, cap_samples);
  } else {
    const int m = u.dim();
    const int nd = v["directions.count"].empty() ? (m == 1 ? 2 : 8) : integer("directions.count", v["directions.count"]);
    s.dirs = make_direction_set(m, nd, cap, cap_samples);
  }
  s.window_radius = num("window.radius", v["window.radius"]);
  s.thresholds.n_rapid = num("decay.n_rapid", v["decay.n_rapid"]);
  s.thresholds.n_sing = num("decay.n_sing", v["decay.n_sing"]);
  s.thresholds.floor_rel = num("decay.floor", v["decay.floor"]);
  s.recompute_conic = boolean("conic.recompute", v["conic.recompute"]);
  s.p_grid.clear();
  for (const auto& p : split_on(v["families.p_grid"], ',')) s.p_grid.push_back(num("families.p_grid", p));
  sc.seed = static_cast<std::uint64_t>(std::stoull(v["seed"]));
  s.seed = sc.seed;
  sc.threads = integer("threads", v["threads"]);

  if (!sc.acs) {
    if (!v["lattice.x"].empty()) {
      for (const auto& p : split_on(v["lattice.x"], ';')) {
        const Point x = point("lattice.x", p);
        if (x.dim != u.dim()) config_error("lattice.x", "point dimension mismatch");
        sc.xs.push_back(x);
      }
    } else {
      sc.xs = default_x_lattice(u, integer("lattice.points", v["lattice.points"]),
                                num("lattice.spacing", v["lattice.spacing"]));
    }
  } else {
    const int d = kern->d;
    if (v["acs.x_tuples"].empty()) {
      sc.x_tuples.push_back(std::vector<Point>(kern->n, Point::zeros(d)));
    } else {
      for (const auto& t : split_on(v["acs.x_tuples"], ';')) {
        std::vector<Point> tup;
        for (const auto& p : split_on(t, '|')) {
          const Point x = point("acs.x_tuples", p);
          if (x.dim != d) config_error("acs.x_tuples", "point dimension mismatch");
          tup.push_back(x);
        }
        if (static_cast<int>(tup.size()) != kern->n) config_error("acs.x_tuples", "tuple arity mismatch");
        sc.x_tuples.push_back(tup);
      }
    }
    if (kern->hermitean) sc.x_tuples = with_mirrors(sc.x_tuples);
  }

  for (const auto& c : split_on(v["checks"], ',')) {
    if (c.empty()) continue;
    if (!known_checks().count(c)) config_error("checks", "unknown check (" + c + ")");
    sc.checks.insert(c);
  }
  for (const auto& [k, val] : v)
    if (k.rfind("checks.", 0) == 0 || k.rfind("acs.", 0) == 0) sc.params[k] = val;
  sc.out_dir = v["output.dir"].empty() ? "out/" + sc.name : v["output.dir"];

  std::string canon = std::string(kVersion) + "\n";
  for (const auto& [k, val] : v)
    if (k != "output.dir" && k != "threads") canon += k + "=" + val + "\n";
  sc.digest = fnv1a_hex(canon);
  s.digest = sc.digest;
  return sc;
}

bool ScenarioResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

// ---------------------------------------------------------------- execution

namespace {

EstimatorSettings kernel_wf_settings(const EstimatorSettings& base) {
  EstimatorSettings s = base;
  s.dirs = make_direction_set(2, 8, base.dirs.cap_radius, base.dirs.cap_samples);
  return s;
}

bool singular_truth_asymmetric(const WfDescriptor& truth, const WfSample& s) {
  return truth.singular(s.point.x, s.point.xi) != truth.singular(s.point.x, s.point.xi * -1.0);
}

}  // namespace

ScenarioResult execute_scenario(const Scenario& sc) {
  ScenarioResult res;
  const Distribution u = parse_catalog_key(sc.distribution);
  EstimatorSettings s = sc.settings;
  s.threads = resolve_threads(sc.threads);
  const auto& P = sc.params;
  auto has = [&](const char* c) { return sc.checks.count(c) > 0; };

  if (!sc.acs) {
    for (auto kind : sc.estimators) res.wf.push_back(run_estimator(kind, u, sc.xs, s));
    WfDescriptor truth;
    bool truth_known = true;
    try {
      truth = catalog_ground_truth(u);
    } catch (const Error&) {
      truth_known = false;
    }

    if (has("ground_truth")) {
      CheckOutcome c{"ground_truth"};
      if (!truth_known) {
        c.pass = false;
        c.notes.push_back("no ground truth for " + sc.distribution);
      }
      const double max_ind = num("checks.ground_truth.max_indeterminate", P.at("checks.ground_truth.max_indeterminate"));
      for (const auto& e : res.wf) {
        if (!truth_known) break;
        const auto g = compare_ground_truth(e, truth);
        const std::string k = to_string(e.estimator);
        c.numbers[k + ".singular_points"] = g.singular_points;
        c.numbers[k + ".false_regular"] = g.false_regular;
        c.numbers[k + ".regular_points"] = g.regular_points;
        c.numbers[k + ".regular_indeterminate"] = g.regular_indeterminate;
        c.numbers[k + ".regular_as_singular"] = g.regular_as_singular;
        if (g.false_regular > 0 || g.indeterminate_rate() > max_ind) c.pass = false;
      }
      res.checks.push_back(c);
    }
    if (has("conicity")) {
      CheckOutcome c{"conicity"};
      for (const auto& e : res.wf) {
        const auto r = check_conicity(e, s.mu_multipliers);
        c.numbers[std::string(to_string(e.estimator)) + ".mismatches"] = r.mismatches;
        c.pass = c.pass && r.pass();
        for (const auto& d : r.details) c.notes.push_back(d);
      }
      res.checks.push_back(c);
    }
    if (has("reflection") && truth_known) {
      CheckOutcome c{"reflection"};
      for (const auto& e : res.wf) {
        int bad = 0;
        for (const auto& smp : e.samples) {
          if (smp.mu != 1.0) continue;
          const WfSample* t = e.find(smp.point.x, smp.point.xi * -1.0);
          if (!t) continue;
          const bool est_asym = t->classification != smp.classification;
          if (est_asym != singular_truth_asymmetric(truth, smp)) ++bad;
        }
        c.numbers[std::string(to_string(e.estimator)) + ".unexpected"] = bad;
        c.pass = c.pass && bad == 0;
      }
      res.checks.push_back(c);
    }
    if (has("agreement")) {
      CheckOutcome c{"agreement"};
      std::vector<const WavefrontEstimate*> ptrs;
      for (const auto& e : res.wf) ptrs.push_back(&e);
      const auto a = cross_validate(ptrs);
      c.numbers["decided_pairs"] = a.decided_pairs;
      c.numbers["disagreements"] = a.disagreements;
      c.numbers["disagreement_rate"] = a.disagreement_rate();
      c.pass = a.disagreement_rate() <= num("checks.agreement.max_rate", P.at("checks.agreement.max_rate"));
      res.checks.push_back(c);
    }
    if (has("robustness")) {
      CheckOutcome c{"robustness"};
      const auto names = split_on(P.at("checks.robustness.multipliers"), ',');
      for (const auto& e : res.wf) {
        const auto r = window_robustness_check(u, e, s, names);
        for (const auto& run : r.runs) {
          const std::string k = std::string(to_string(e.estimator)) + "." + run.multiplier;
          c.numbers[k + ".failures"] = run.failures;
          c.numbers[k + ".warnings"] = run.warnings;
        }
        c.pass = c.pass && r.pass();
      }
      res.checks.push_back(c);
    }
    if (has("covariance") && !res.wf.empty()) {
      CheckOutcome c{"covariance"};
      // the first two lattice points around the centre
      std::vector<Point> sub{sc.xs[sc.xs.size() / 2]};
      if (sc.xs.size() > 1) sub.push_back(sc.xs[sc.xs.size() / 2 + 1 < sc.xs.size() ? sc.xs.size() / 2 + 1 : 0]);
      const auto r = check_translation_covariance_wf(u, sc.estimators.front(), sub, s);
      c.numbers["compared"] = r.compared;
      c.numbers["mismatches"] = r.mismatches;
      c.notes = r.details;
      c.pass = r.pass();
      res.checks.push_back(c);
    }
    if (has("probes")) {
      CheckOutcome c{"probes"};
      const auto pr = quadrature_probes(u, sc.xs, s, integer("checks.probes.count", P.at("checks.probes.count")), sc.seed);
      int fails = 0;
      double worst = 0.0;
      for (const auto& p : pr) {
        fails += !p.pass;
        const double tol = p.err_fast + p.err_direct;
        if (tol > 0.0) worst = std::max(worst, std::abs(p.fast - p.direct) / tol);
      }
      c.numbers["probes"] = static_cast<double>(pr.size());
      c.numbers["failures"] = fails;
      c.numbers["worst_ratio"] = worst;
      c.pass = fails == 0;
      res.checks.push_back(c);
    }
    if (has("lemma")) {
      CheckOutcome c{"lemma"};
      std::vector<TestingFamily> fams;
      for (const auto& x : sc.xs) {
        auto f = suite_at(s, x);
        fams.insert(fams.end(), f.begin(), f.end());
      }
      std::vector<Point> ks;
      for (const auto& d : s.dirs.directions) ks.push_back(d);
      const auto r = check_lemma_bound(fams, s.ladder, ks);
      c.numbers["compared"] = r.compared;
      c.numbers["violations"] = r.mismatches;
      c.pass = r.pass();
      res.checks.push_back(c);
    }
    if (has("subadditivity") && !res.wf.empty()) {
      CheckOutcome c{"subadditivity"};
      const std::string other = P.at("checks.subadditivity.with");
      if (other.empty()) config_error("checks.subadditivity.with", "missing required key");
      const Distribution v = parse_catalog_key(other);
      const Distribution w = sum({u, v});
      const auto kind = sc.estimators.front();
      const auto ev = run_estimator(kind, v, sc.xs, s);
      const auto ew = run_estimator(kind, w, sc.xs, s);
      const auto r = check_subadditivity(res.wf.front(), ev, ew);
      c.numbers["compared"] = r.compared;
      c.numbers["violations"] = r.mismatches;
      c.notes = r.details;
      c.pass = r.pass();
      res.checks.push_back(c);
    }
    return res;
  }

  // ---- ACS scenarios
  const auto* kern = u.as<TranslationKernel>();
  res.acs = estimate_acs(u, sc.x_tuples, s);
  AcsEstimate& acs = *res.acs;
  const ConeSpec cone{kern->d, kern->n};
  const double tol = P.at("checks.cone.tol").empty() ? s.dirs.cap_radius : num("checks.cone.tol", P.at("checks.cone.tol"));

  if (!P.at("checks.cone.plant").empty()) {
    AcsSample planted;
    planted.point.xs = sc.x_tuples.front();
    for (const auto& p : split_on(P.at("checks.cone.plant"), '|')) planted.point.ks.push_back(point("checks.cone.plant", p));
    planted.classification = Classification::Singular;
    planted.family_labels = {"planted"};
    acs.samples.push_back(planted);
  }
  if (has("cone")) {
    CheckOutcome c{"cone"};
    const auto r = check_cone_bound(acs, cone, tol);
    c.numbers["singular"] = r.singular;
    c.numbers["violations"] = static_cast<double>(r.violations.size());
    c.numbers["tol"] = tol;
    for (const auto& p : r.violations) c.notes.push_back(to_string(p));
    c.pass = r.pass();
    res.checks.push_back(c);
  }
  if (has("hermitean")) {
    CheckOutcome c{"hermitean"};
    const auto r = check_hermitean_symmetry(acs);
    c.numbers["compared"] = r.compared;
    c.numbers["asymmetric"] = static_cast<double>(r.asymmetric.size());
    if (!r.applicable) c.notes.push_back("not applicable: functional is not hermitean");
    for (const auto& p : r.asymmetric) c.notes.push_back(to_string(p));
    c.pass = r.pass();
    res.checks.push_back(c);
  }
  if (has("salient")) {
    CheckOutcome c{"salient"};
    const bool locality = boolean("acs.locality", P.at("acs.locality"));
    const ConePredicate W = [cone, tol](const std::vector<Point>& ks) {
      double n2 = 0.0;
      for (const auto& k : ks) n2 += k.dot(k);
      return n2 > 0.0 && cone_membership(ks, cone, tol * std::sqrt(n2));
    };
    int findings = 0, acausal = 0;
    for (const auto& t : sc.x_tuples) {
      const auto r = salient_cone_filter(acs, t, W, locality);
      findings += static_cast<int>(r.findings.size());
      acausal += r.acausal;
      for (const auto& p : r.findings) c.notes.push_back("theorem-violation finding " + to_string(p));
    }
    c.numbers["acausal_tuples"] = acausal;
    c.numbers["findings"] = findings;
    c.pass = findings == 0;
    res.checks.push_back(c);
  }
  if (has("covariance")) {
    CheckOutcome c{"covariance"};
    const Point shift = P.at("checks.covariance.shift").empty() ? Point::filled(kern->d, 1.0)
                                                                : point("checks.covariance.shift", P.at("checks.covariance.shift"));
    const auto r = check_translation_covariance(u, sc.x_tuples, shift, s);
    c.numbers["compared"] = r.compared;
    c.numbers["mismatches"] = r.mismatches;
    c.pass = r.pass();
    res.checks.push_back(c);
  }
  if (has("inclusion") || has("diagonal")) {
    if (kern->n != 2 || kern->d != 1) {
      for (const char* name : {"inclusion", "diagonal"})
        if (has(name)) {
          CheckOutcome c{name};
          c.notes.push_back("not applicable: kernel wavefront is estimated for d = 1 two-point kernels");
          res.checks.push_back(c);
        }
    } else {
      std::vector<Point> xs;
      for (const auto& t : sc.x_tuples) xs.push_back(concat(t));
      res.wf.push_back(estimate_wf_classical(u, xs, kernel_wf_settings(s)));
      const WavefrontEstimate& kwf = res.wf.back();
      if (has("inclusion")) {
        CheckOutcome c{"inclusion"};
        const auto r = check_wf_acs_inclusion(kwf, acs);
        c.numbers["wf_singular"] = r.wf_singular;
        c.numbers["matched"] = r.matched;
        c.numbers["violations"] = static_cast<double>(r.violations.size());
        c.pass = r.pass();
        res.checks.push_back(c);
      }
      if (has("diagonal")) {
        CheckOutcome c{"diagonal"};
        const auto r = check_diagonal_singularity(kwf, sc.x_tuples.front().front());
        const std::string expect = P.at("checks.diagonal.expect");
        c.numbers["directions"] = r.directions;
        c.numbers["singular"] = r.singular;
        c.numbers["indeterminate"] = r.indeterminate;
        c.notes.push_back(std::string("status ") + to_string(r.status));
        if (expect == "singular") c.pass = r.status != Classification::Regular;
        else if (expect == "regular") c.pass = r.status == Classification::Regular;
        else config_error("checks.diagonal.expect", "expected singular or regular");
        if (r.status == Classification::Regular) c.notes.push_back("consistent with a trivial field");
        res.checks.push_back(c);
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------- reports

namespace {

json fit_json(const DecayFit& f) {
  json j;
  j["slope"] = f.slope;
  j["excess_slope"] = f.degenerate ? json(nullptr) : json(f.excess_slope());
  j["r2"] = f.r2;
  j["floor_hit"] = f.floor_hit;
  j["degenerate"] = f.degenerate;
  j["suffix_unstable"] = f.suffix_unstable;
  j["trivial_order"] = f.trivial_order;
  return j;
}

json counts_json(const std::vector<Classification>& cls) {
  int r = 0, s = 0, i = 0;
  for (auto c : cls) {
    if (c == Classification::Regular) ++r;
    else if (c == Classification::Singular) ++s;
    else ++i;
  }
  return json{{"Regular", r}, {"Singular", s}, {"Indeterminate", i}};
}

void write_svg(const WavefrontEstimate& e, const std::string& path, const std::string& title) {
  std::vector<Point> xs;
  std::vector<double> angles;
  for (const auto& s : e.samples) {
    if (s.mu != 1.0) continue;
    if (std::find(xs.begin(), xs.end(), s.point.x) == xs.end()) xs.push_back(s.point.x);
    const double a = s.point.xi.dim == 1 ? (s.point.xi[0] > 0 ? 0.0 : kPi) : std::atan2(s.point.xi[1], s.point.xi[0]);
    const double an = a < 0 ? a + 2 * kPi : a;
    if (std::find(angles.begin(), angles.end(), an) == angles.end()) angles.push_back(an);
  }
  std::sort(angles.begin(), angles.end());
  const int cw = 18, ch = 18, left = 70, top = 40;
  const int W = left + cw * static_cast<int>(xs.size()) + 20, H = top + ch * static_cast<int>(angles.size()) + 60;
  std::ofstream f(path);
  f << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n";
  f << "<text x=\"4\" y=\"16\" font-family=\"monospace\" font-size=\"12\">" << title << " (" << to_string(e.estimator)
    << ")</text>\n";
  for (std::size_t r = 0; r < angles.size(); ++r)
    f << "<text x=\"4\" y=\"" << top + ch * r + 13 << "\" font-family=\"monospace\" font-size=\"10\">"
      << fmt(std::round(angles[r] * 180.0 / kPi)) << "deg</text>\n";
  for (const auto& s : e.samples) {
    if (s.mu != 1.0) continue;
    const std::size_t col = std::find(xs.begin(), xs.end(), s.point.x) - xs.begin();
    const double a = s.point.xi.dim == 1 ? (s.point.xi[0] > 0 ? 0.0 : kPi) : std::atan2(s.point.xi[1], s.point.xi[0]);
    const double an = a < 0 ? a + 2 * kPi : a;
    const std::size_t row = std::find(angles.begin(), angles.end(), an) - angles.begin();
    const char* color = s.classification == Classification::Singular  ? "#c0392b"
                        : s.classification == Classification::Regular ? "#d5e8d4"
                                                                      : "#f0b429";
    f << "<rect x=\"" << left + cw * col << "\" y=\"" << top + ch * row << "\" width=\"" << cw - 1 << "\" height=\""
      << ch - 1 << "\" fill=\"" << color << "\"><title>x=" << to_string(s.point.x) << " xi=" << to_string(s.point.xi)
      << " " << to_string(s.classification) << "</title></rect>\n";
  }
  const int ly = top + ch * static_cast<int>(angles.size()) + 20;
  f << "<text x=\"" << left << "\" y=\"" << ly << "\" font-family=\"monospace\" font-size=\"10\">x: sample index (" << xs.size()
    << " points); red Singular, green Regular, amber Indeterminate</text>\n";
  f << "</svg>\n";
}

}  // namespace

void emit_report(const Scenario& sc, const ScenarioResult& res, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream csv(fs::path(dir) / "decay.csv");
    csv << "estimator,x,xi,mu,lambda,magnitude,error,classification\n";
    auto rows = [&](const std::string& name, const Point& x, const Point& xi, double mu, const DecayFit& f,
                    Classification c) {
      for (std::size_t j = 0; j < f.lambdas.size(); ++j)
        csv << name << "," << coords(x) << "," << coords(xi) << "," << fmt(mu) << "," << fmt(f.lambdas[j]) << ","
            << fmt(f.magnitudes[j]) << "," << fmt(j < f.errors.size() ? f.errors[j] : 0.0) << "," << to_string(c)
            << "\n";
    };
    for (const auto& e : res.wf)
      for (const auto& s : e.samples) rows(to_string(e.estimator), s.point.x, s.point.xi, s.mu, s.fit, s.classification);
    if (res.acs)
      for (const auto& s : res.acs->samples)
        rows("acs", concat(s.point.xs), concat(s.point.ks), s.mu, s.fit, s.classification);
  }
  json j;
  j["name"] = sc.name;
  j["distribution"] = sc.distribution;
  j["version"] = kVersion;
  j["config_digest"] = sc.digest;
  j["seed"] = sc.seed;
  j["ladder"] = sc.settings.ladder.values;
  j["estimates"] = json::array();
  for (const auto& e : res.wf) {
    json je;
    je["estimator"] = to_string(e.estimator);
    if (!e.p_grid.empty()) je["p_grid"] = e.p_grid;
    std::vector<Classification> cls;
    je["samples"] = json::array();
    for (const auto& s : e.samples) {
      cls.push_back(s.classification);
      je["samples"].push_back(json{{"x", to_json(s.point.x)},
                                   {"xi", to_json(s.point.xi)},
                                   {"mu", s.mu},
                                   {"classification", to_string(s.classification)},
                                   {"fit", fit_json(s.fit)}});
    }
    je["counts"] = counts_json(cls);
    je["flags"] = e.flags;
    j["estimates"].push_back(je);
  }
  if (res.acs) {
    json ja;
    ja["functional"] = res.acs->functional_id;
    ja["n"] = res.acs->n;
    ja["d"] = res.acs->d;
    ja["hermitean"] = res.acs->hermitean;
    std::vector<Classification> cls;
    ja["samples"] = json::array();
    for (const auto& s : res.acs->samples) {
      cls.push_back(s.classification);
      json xs = json::array(), ks = json::array();
      for (const auto& x : s.point.xs) xs.push_back(to_json(x));
      for (const auto& k : s.point.ks) ks.push_back(to_json(k));
      ja["samples"].push_back(json{{"xs", xs},
                                   {"ks", ks},
                                   {"mu", s.mu},
                                   {"classification", to_string(s.classification)},
                                   {"fit", fit_json(s.fit)}});
    }
    ja["counts"] = counts_json(cls);
    j["acs"] = ja;
  }
  j["checks"] = json::object();
  for (const auto& c : res.checks) {
    json jc;
    jc["pass"] = c.pass;
    jc["numbers"] = c.numbers;
    jc["notes"] = c.notes;
    j["checks"][c.name] = jc;
  }
  j["status"] = res.pass() ? "pass" : "fail";
  j["exit_code"] = res.exit_code();
  std::ofstream(fs::path(dir) / "summary.json") << j.dump(2) << "\n";

  if (!res.wf.empty() && !res.acs && res.wf.front().samples.size() > 0 &&
      res.wf.front().samples.front().point.x.dim <= 2)
    write_svg(res.wf.front(), (fs::path(dir) / "wf_map.svg").string(), sc.name);
}

int run_scenario_config(ScenarioConfig cfg, const RunOptions& opt, std::ostream& log) {
  try {
    for (const auto& o : opt.overrides) apply_override(cfg, o);
    if (opt.seed) cfg.values["seed"] = std::to_string(*opt.seed);
    if (opt.threads > 0) cfg.values["threads"] = std::to_string(opt.threads);
    Scenario sc = build_scenario(cfg);
    if (!opt.out_dir.empty()) sc.out_dir = opt.out_dir;
    const ScenarioResult res = execute_scenario(sc);
    emit_report(sc, res, sc.out_dir);
    log << sc.name << ": " << (res.pass() ? "pass" : "FAIL") << " (" << sc.out_dir << ")\n";
    for (const auto& c : res.checks) log << "  check " << c.name << ": " << (c.pass ? "pass" : "FAIL") << "\n";
    return res.exit_code();
  } catch (const Error& e) {
    log << "error";
    if (e.code() == ErrorCode::ConfigError) log << " (ConfigError)";
    log << " in " << cfg.origin << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error in " << cfg.origin << ": " << e.what() << "\n";
    return 1;
  }
}

int run_scenario(const std::string& path, const RunOptions& opt, std::ostream& log) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(path);
  } catch (const Error& e) {
    log << "error (ConfigError) in " << path << ": " << e.what() << "\n";
    return 1;
  }
  return run_scenario_config(cfg, opt, log);
}

const std::vector<BundledScenario>& self_test_scenarios() {
  static const std::vector<BundledScenario> s{
      {"delta-1d",
       "name = delta-1d\ndistribution = delta@0\nestimator = all\nladder.count = 12\n"
       "checks = ground_truth,conicity,reflection,agreement,probes,lemma\n",
       0},
      {"planted-cone",
       "name = planted-cone\ndistribution = kernel:smooth\nestimator = acs\nladder.count = 12\n"
       "acs.x_tuples = 0|0\nchecks = cone\nchecks.cone.plant = 1|-1\n",
       2},
      {"missing-ladder", "name = missing-ladder\ndistribution = delta@0\nestimator = classical\n", 1},
  };
  return s;
}

int self_test(const std::string& out_root, std::ostream& log) {
  int bad = 0;
  for (const auto& b : self_test_scenarios()) {
    RunOptions o;
    o.out_dir = (fs::path(out_root) / b.name).string();
    const int code = run_scenario_config(parse_scenario_text(b.text, "self-test:" + b.name), o, log);
    const bool ok = code == b.expected_exit;
    log << "self-test " << b.name << ": exit " << code << " (expected " << b.expected_exit << ") "
        << (ok ? "ok" : "MISMATCH") << "\n";
    bad += !ok;
  }
  return bad == 0 ? 0 : 1;
}

}  // namespace microspec
