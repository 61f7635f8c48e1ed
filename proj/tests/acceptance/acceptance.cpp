// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "microspec/acs.hpp"
#include "microspec/scenario.hpp"
#include "microspec/wavefront.hpp"

using namespace microspec;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCatalog{"delta@0",      "delta'@0",    "heaviside@0",       "pv@0",
                                        "bv:-i0@0",     "smooth:gauss", "line-delta:n=(1,0)"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Verdict {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Verdict> verdicts;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  verdicts.push_back({id, title, pass, detail});
  std::printf("criterion %d [%s]: %s (%s)\n", id, title.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CatalogRun {
  Distribution u;
  std::vector<Point> xs;
  EstimatorSettings s;
  std::map<EstimatorKind, WavefrontEstimate> est;
  std::map<EstimatorKind, double> seconds;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string scenario_dir = argc > 1 ? argv[1] : MICROSPEC_SCENARIOS;
  const fs::path work = fs::temp_directory_path() / "microspec-acceptance";
  fs::remove_all(work);
  const auto t_all = std::chrono::steady_clock::now();
  const std::vector<EstimatorKind> kinds{EstimatorKind::Classical, EstimatorKind::ScalingFamilies,
                                         EstimatorKind::SingleFamily};

  std::vector<CatalogRun> runs;
  for (const auto& key : kCatalog) {
    CatalogRun r{parse_catalog_key(key), {}, {}, {}, {}};
    r.s = default_settings(r.u.dim());
    r.s.threads = resolve_threads(0);
    r.xs = default_x_lattice(r.u);
    for (auto k : kinds) {
      const auto t0 = std::chrono::steady_clock::now();
      r.est.emplace(k, run_estimator(k, r.u, r.xs, r.s));
      r.seconds[k] = seconds_since(t0);
    }
    runs.push_back(std::move(r));
  }

  // 1
  {
    bool ok = true;
    std::string d;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = runs[i];
      const auto g = compare_ground_truth(r.est.at(EstimatorKind::Classical), catalog_ground_truth(r.u));
      const double t = r.seconds.at(EstimatorKind::Classical);
      const bool has_truth_singular = g.singular_points > 0 || kCatalog[i] == "smooth:gauss";
      ok = ok && has_truth_singular && g.false_regular == 0 && g.indeterminate_rate() <= 0.10 && t < 60.0;
      d += fmt("%s: %d/%d false-Regular, %.1f%% Indeterminate, %.2fs; ", kCatalog[i].c_str(), g.false_regular,
               g.singular_points, 100.0 * g.indeterminate_rate(), t);
    }
    report(1, "catalog soundness", ok, d);
  }

  // 2
  {
    int decided = 0, disagree = 0, not_adjacent = 0;
    double total = 0.0;
    for (const auto& r : runs) {
      const auto a = cross_validate({&r.est.at(kinds[0]), &r.est.at(kinds[1]), &r.est.at(kinds[2])});
      decided += a.decided_pairs;
      disagree += a.disagreements;
      not_adjacent += a.disagreements_not_adjacent;
      for (auto k : kinds) total += r.seconds.at(k);
    }
    const double rate = decided ? 1.0 - double(disagree) / decided : 0.0;
    report(2, "estimator equivalence", decided > 0 && rate >= 0.95 && not_adjacent == 0 && total < 300.0,
           fmt("agreement %.2f%% over %d decided pairs, %d disagreements (%d not Indeterminate-adjacent), %.1fs total",
               100.0 * rate, decided, disagree, not_adjacent, total));
  }

  // 3
  {
    int flips = 0, warnings = 0, compared = 0;
    for (const auto& r : runs)
      for (auto k : kinds) {
        const auto rob = window_robustness_check(r.u, r.est.at(k), r.s, {"cos", "quadratic"});
        for (const auto& f : rob.runs) {
          flips += f.failures;
          warnings += f.warnings;
          compared += f.compared;
        }
      }
    report(3, "window robustness", compared > 0 && flips == 0,
           fmt("%d Regular->Singular flips, %d Regular->Indeterminate warnings over %d comparisons", flips, warnings,
               compared));
  }

  // ACS fixtures (shared by 4-8)
  auto acs_run = [](const std::string& key, std::vector<std::vector<Point>> tuples) {
    const Distribution u = parse_catalog_key(key);
    const auto* k = u.as<TranslationKernel>();
    auto s = default_acs_settings(k->n, k->d);
    s.threads = resolve_threads(0);
    if (k->hermitean) tuples = with_mirrors(tuples);
    return estimate_acs(u, tuples, s);
  };
  const auto t_acs = std::chrono::steady_clock::now();
  const AcsEstimate acs_bv = acs_run("kernel:bv", {{Point{0.0}, Point{0.0}}, {Point{0.0}, Point{2.5}}});
  const AcsEstimate acs_delta = acs_run("kernel:delta", {{Point{0.0}, Point{0.0}}});
  const AcsEstimate acs_smooth = acs_run("kernel:smooth", {{Point{0.0}, Point{0.0}}});
  const AcsEstimate acs_chiral = acs_run("kernel:chiral2d", {{Point{0.0, 0.0}, Point{0.0, 0.0}}});
  const AcsEstimate acs_space = acs_run("kernel:chiral2d", {{Point{0.0, 0.0}, Point{0.0, 5.0}}});
  const double acs_seconds = seconds_since(t_acs);

  // 4
  {
    int conic = 0, conic_n = 0;
    for (const auto& r : runs) {
      auto s = r.s;
      s.recompute_conic = true;
      for (auto k : {EstimatorKind::Classical, EstimatorKind::ScalingFamilies}) {
        if (k == EstimatorKind::ScalingFamilies && r.u.dim() == 2) continue;
        const auto c = check_conicity(run_estimator(k, r.u, r.xs, s), s.mu_multipliers);
        conic += c.mismatches;
        conic_n += c.compared;
      }
    }
    int cov = 0, cov_n = 0;
    for (const auto& r : runs) {
      std::vector<Point> sub{r.xs[r.xs.size() / 2], r.xs[r.xs.size() / 2 + 1]};
      const auto c = check_translation_covariance_wf(r.u, EstimatorKind::Classical, sub, r.s);
      cov += c.mismatches;
      cov_n += c.compared;
    }
    {
      const auto s = default_acs_settings(2, 1);
      const auto c = check_translation_covariance(parse_catalog_key("kernel:bv"), {{Point{0.0}, Point{0.0}}},
                                                  Point{1.5}, s);
      cov += c.mismatches;
      cov_n += c.compared;
    }
    int asym = 0, herm_n = 0;
    for (const AcsEstimate* e : {&acs_bv, &acs_chiral, &acs_space}) {
      const auto h = check_hermitean_symmetry(*e);
      asym += static_cast<int>(h.asymmetric.size());
      herm_n += h.compared;
    }
    int sub_v = 0, sub_n = 0;
    for (auto k : {EstimatorKind::Classical, EstimatorKind::ScalingFamilies}) {
      const Distribution a = parse_catalog_key("delta@0"), b = parse_catalog_key("bv:-i0@2.5");
      const Distribution w = sum({a, b});
      const auto s = default_settings(1);
      const auto xs = default_x_lattice(w);
      const auto c = check_subadditivity(run_estimator(k, a, xs, s), run_estimator(k, b, xs, s), run_estimator(k, w, xs, s));
      sub_v += c.mismatches;
      sub_n += c.compared;
    }
    report(4, "structural suite", conic_n > 0 && conic == 0 && cov_n > 0 && cov == 0 && herm_n > 0 && asym == 0 &&
                                      sub_n > 0 && sub_v == 0,
           fmt("conicity %d/%d mismatches, covariance %d/%d, hermitean %d/%d asymmetric, subadditivity %d/%d", conic,
               conic_n, cov, cov_n, asym, herm_n, sub_v, sub_n));
  }

  // 5
  {
    const double tol = default_acs_settings(2, 1).dirs.cap_radius;
    const auto c1 = check_cone_bound(acs_bv, {1, 2}, tol);
    const auto c2 = check_cone_bound(acs_chiral, {2, 2}, tol);
    int planted = -1, planted_exit = -1;
    for (const auto& b : self_test_scenarios()) {
      if (b.name != "planted-cone") continue;
      std::ostringstream log;
      RunOptions o;
      o.out_dir = (work / "planted").string();
      planted_exit = run_scenario_config(parse_scenario_text(b.text, b.name), o, log);
      const auto j = nlohmann::json::parse(slurp(work / "planted" / "summary.json"));
      planted = static_cast<int>(j["checks"]["cone"]["numbers"]["violations"].get<double>());
    }
    report(5, "cone bound",
           c1.singular > 0 && c1.pass() && c2.singular > 0 && c2.pass() && planted == 1 && planted_exit == 2,
           fmt("d=1: %d singular, %zu violations; d=2: %d singular, %zu violations; tol %.2f; planted self-test "
               "%d violation(s), exit %d",
               c1.singular, c1.violations.size(), c2.singular, c2.violations.size(), tol, planted, planted_exit));
  }

  // 6
  {
    int regular = 0;
    for (const auto& s : acs_space.samples) regular += s.classification == Classification::Regular;
    const bool acausal = properly_acausal(acs_space.samples.front().point.xs);
    report(6, "spacelike slice", acausal && !acs_space.samples.empty() && regular == int(acs_space.samples.size()),
           fmt("%d/%zu samples Regular at a properly acausal pair", regular, acs_space.samples.size()));
  }

  // 7 and 8
  {
    int violations = 0, wf_sing = 0;
    std::string diag;
    bool diag_ok = true;
    const std::vector<std::pair<std::string, const AcsEstimate*>> fixtures{
        {"kernel:bv", &acs_bv}, {"kernel:delta", &acs_delta}, {"kernel:smooth", &acs_smooth}};
    for (const auto& [key, acs] : fixtures) {
      std::vector<Point> xs;
      for (const auto& smp : acs->samples) {
        const Point x = concat(smp.point.xs);
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
      }
      auto s = default_settings(2);
      s.threads = resolve_threads(0);
      const auto wf = estimate_wf_classical(parse_catalog_key(key), xs, s);
      const auto inc = check_wf_acs_inclusion(wf, *acs);
      violations += static_cast<int>(inc.violations.size());
      wf_sing += inc.wf_singular;
      const auto d = check_diagonal_singularity(wf, Point{0.0});
      const Classification want = key == "kernel:smooth" ? Classification::Regular : Classification::Singular;
      diag_ok = diag_ok && d.status == want;
      diag += fmt("%s %s; ", key.c_str(), to_string(d.status));
    }
    report(7, "wf inclusion", wf_sing > 0 && violations == 0,
           fmt("%d kernel-WF singular samples, %d not in the ACS estimate (n=2, d=1 fixtures)", wf_sing, violations));
    report(8, "diagonal singularity", diag_ok, diag);
  }

  // 9
  {
    int probes = 0, fails = 0;
    double worst = 0.0;
    for (const auto& r : runs) {
      const auto pr = quadrature_probes(r.u, r.xs, r.s, 16, r.s.seed);
      for (const auto& p : pr) {
        ++probes;
        fails += !p.pass;
        const double tol = p.err_fast + p.err_direct;
        if (tol > 0.0) worst = std::max(worst, std::abs(p.fast - p.direct) / tol);
      }
    }
    int lemma = 0, lemma_n = 0;
    for (int dim : {1, 2}) {
      const auto s = default_settings(dim);
      std::vector<Point> ks(s.dirs.directions.begin(), s.dirs.directions.end());
      const auto c = check_lemma_bound(suite_at(s, Point::zeros(dim)), s.ladder, ks);
      lemma += c.mismatches;
      lemma_n += c.compared;
    }
    report(9, "quadrature and lemma bound", probes == 16 * int(runs.size()) && fails == 0 && lemma_n > 0 && lemma == 0,
           fmt("%d/%d probes outside 10x error (worst ratio %.3g); lemma bound %d/%d violations", fails, probes, worst,
               lemma, lemma_n));
  }

  // 10
  {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(scenario_dir))
      if (e.path().extension() == ".cfg") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    int differing = 0, compared = 0;
    std::string d;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& f : files) {
        std::ostringstream log;
        RunOptions o;
        o.out_dir = (work / (pass ? "b" : "a") / f.stem()).string();
        o.threads = pass ? 2 : 1;
        run_scenario(f.string(), o, log);
      }
    for (const auto& f : files)
      for (const char* name : {"decay.csv", "summary.json"}) {
        const fs::path a = work / "a" / f.stem() / name, b = work / "b" / f.stem() / name;
        if (!fs::exists(a) && !fs::exists(b)) continue;
        ++compared;
        if (slurp(a) != slurp(b)) {
          ++differing;
          d += " " + f.stem().string() + "/" + name;
        }
      }
    report(10, "determinism", compared > 0 && differing == 0,
           fmt("%zu scenarios, %d report files compared across 1- and 2-thread runs, %d differ%s", files.size(),
               compared, differing, d.c_str()));
  }

  int failed = 0;
  for (const auto& v : verdicts) failed += !v.pass;
  std::printf("acceptance: %zu criteria, %d failed, %.1fs (ACS fixtures %.1fs)\n", verdicts.size(), failed,
              seconds_since(t_all), acs_seconds);
  fs::remove_all(work);
  return failed ? 1 : 0;
}
