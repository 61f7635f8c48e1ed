#include "microspec/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace microspec {

const char* to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::Classical: return "classical";
    case EstimatorKind::ScalingFamilies: return "scaling";
    default: return "singlefamily";
  }
}

EstimatorSettings default_settings(int dim) {
  EstimatorSettings s;
  s.dirs = make_direction_set(dim, dim == 1 ? 2 : 8, 0.1, 5);
  return s;
}

const WfSample* WavefrontEstimate::find(const Point& x, const Point& xi, double tol) const {
  for (const auto& s : samples)
    if ((s.point.x - x).norm() <= tol && (s.point.xi - xi).norm() <= tol * std::max(1.0, xi.norm())) return &s;
  return nullptr;
}

std::vector<Point> default_x_lattice(const Distribution& u, int per_axis, double spacing) {
  const int m = u.dim();
  Point anchor = Point::zeros(m);
  if (m == 1) {
    for (const auto& f : u.features())
      if (f.normal[0] != 0.0) {
        anchor = Point{f.offset / f.normal[0]};
        break;
      }
  }
  const int half = per_axis / 2;
  std::vector<Point> xs;
  if (m == 1) {
    for (int i = -half; i < per_axis - half; ++i) xs.push_back(Point{anchor[0] + spacing * i});
  } else if (m == 2) {
    for (int i = -half; i < per_axis - half; ++i)
      for (int j = -half; j < per_axis - half; ++j) xs.push_back(Point{anchor[0] + spacing * i, anchor[1] + spacing * j});
  } else {
    throw Error(ErrorCode::InvalidArgument, "default lattice exists for dim 1 and 2");
  }
  return xs;
}

std::vector<TestingFamily> suite_at(const EstimatorSettings& s, const Point& x) {
  if (s.suite) return s.suite(x);
  return default_family_suite(x, s.ladder.values, s.seed);
}

WfSample combine_family_fits(const PhasePoint& pt, std::vector<std::string> labels, std::vector<DecayFit> fits) {
  WfSample w;
  w.point = pt;
  bool any_singular = false, all_regular = true;
  for (const auto& f : fits) {
    any_singular = any_singular || f.classification == Classification::Singular;
    all_regular = all_regular && f.classification == Classification::Regular;
  }
  w.classification = any_singular ? Classification::Singular
                     : all_regular ? Classification::Regular
                                   : Classification::Indeterminate;
  // deciding fit: least decayed among those carrying the combined class
  int decider = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].classification != w.classification) continue;
    const double ex = fits[i].degenerate ? std::numeric_limits<double>::infinity() : fits[i].excess_slope();
    if (decider < 0 || ex < best) {
      best = ex;
      decider = static_cast<int>(i);
    }
  }
  if (decider >= 0) w.fit = fits[decider];
  w.family_labels = std::move(labels);
  w.family_fits = std::move(fits);
  return w;
}

namespace {

using EvalFn = std::function<std::vector<IntegralRecord>(double lambda, const std::vector<Point>& targets)>;

struct CapTable {
  std::vector<std::vector<double>> mag, err;  // [direction][lambda]
};

CapTable evaluate_caps(const EvalFn& eval, const std::vector<double>& lambdas,
                       const std::vector<std::vector<Point>>& caps) {
  std::vector<Point> targets;
  std::vector<std::size_t> owner;
  for (std::size_t d = 0; d < caps.size(); ++d)
    for (const auto& k : caps[d]) {
      targets.push_back(k);
      owner.push_back(d);
    }
  CapTable t;
  t.mag.assign(caps.size(), std::vector<double>(lambdas.size(), 0.0));
  t.err = t.mag;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const auto recs = eval(lambdas[j], targets);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      auto& m = t.mag[owner[i]][j];
      auto& e = t.err[owner[i]][j];
      m = std::max(m, std::abs(recs[i].value));
      e = std::max(e, recs[i].quadrature_error);
    }
  }
  return t;
}

DecayFit make_fit(const std::vector<double>& lambdas, const std::vector<double>& mag, const std::vector<double>& err,
                  double trivial, const EstimatorSettings& s) {
  return with_suffix_check(polynomial_prefactor_adjust(fit_decay(lambdas, mag, s.thresholds, err), trivial),
                           s.suffix_drop);
}

std::vector<std::vector<Point>> caps_for(const DirectionSet& dirs, double mu) {
  std::vector<std::vector<Point>> caps;
  for (const auto& d : dirs.directions) caps.push_back(dirs.cap(d * mu));
  return caps;
}

std::vector<double> scaled_values(const std::vector<double>& v, double mu) {
  std::vector<double> out(v);
  for (auto& x : out) x *= mu;
  return out;
}

void flag_isolated(WavefrontEstimate& est, const DirectionSet& dirs) {
  if (dirs.dim != 2 || dirs.directions.size() < 5) return;
  const int nd = static_cast<int>(dirs.directions.size());
  std::map<std::string, std::vector<const WfSample*>> by_x;
  for (const auto& s : est.samples)
    if (s.mu == 1.0 && s.direction >= 0) {
      auto& v = by_x[to_string(s.point.x)];
      if (v.empty()) v.assign(nd, nullptr);
      v[s.direction] = &s;
    }
  for (const auto& [key, v] : by_x) {
    for (int d = 0; d < nd; ++d) {
      if (!v[d] || v[d]->classification != Classification::Singular) continue;
      bool isolated = true;
      for (int o : {-2, -1, 1, 2}) {
        const auto* n = v[((d + o) % nd + nd) % nd];
        if (!n || n->classification != Classification::Regular) isolated = false;
      }
      if (isolated) est.flags.push_back("isolated singular direction at x=" + key + " xi=" +
                                        to_string(v[d]->point.xi));
    }
  }
}

/// Shared driver for the family-based estimators.
WavefrontEstimate scaling_driver(const Distribution& u, const std::vector<Point>& xs, const EstimatorSettings& s,
                                 EstimatorKind kind, const std::function<std::vector<TestingFamily>(const Point&)>& suite) {
  const int m = u.dim();
  if (s.dirs.dim != m) throw Error(ErrorCode::InvalidArgument, "direction set dimension mismatch");
  Window h = make_bump(Point::zeros(m), s.window_radius);
  if (s.multiplier) h = h.with_multiplier(*s.multiplier, s.multiplier_label);

  std::vector<std::vector<TestingFamily>> suites;
  for (const auto& x : xs) suites.push_back(suite(x));

  std::vector<double> mus{1.0};
  if (s.recompute_conic)
    for (double mu : s.mu_multipliers) mus.push_back(mu);

  struct Item {
    std::size_t xi, fi, mi;
  };
  std::vector<Item> items;
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t f = 0; f < suites[a].size(); ++f)
      for (std::size_t mi = 0; mi < mus.size(); ++mi) items.push_back({a, f, mi});

  std::vector<std::vector<DecayFit>> fits(items.size());
  const int threads = resolve_threads(s.threads);
  parallel_for(items.size(), threads, [&](std::size_t i) {
    const Item& it = items[i];
    const double mu = mus[it.mi];
    const TestingFamily fam = mu == 1.0 ? suites[it.xi][it.fi] : suites[it.xi][it.fi].reparametrized(mu);
    const auto lambdas = scaled_values(s.ladder.values, mu);
    const EvalFn eval = [&](double lam, const std::vector<Point>& t) {
      return windowed_scaled_ft(u, h, fam, lam, t, s.osc);
    };
    const CapTable tab = evaluate_caps(eval, lambdas, caps_for(s.dirs, mu));
    for (std::size_t d = 0; d < tab.mag.size(); ++d)
      fits[i].push_back(make_fit(lambdas, tab.mag[d], tab.err[d], fam.trivial_order(), s));
  });

  WavefrontEstimate est;
  est.estimator = kind;
  est.config_digest = s.digest;
  if (kind == EstimatorKind::SingleFamily) est.p_grid = s.p_grid;
  std::size_t i = 0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const std::size_t nf = suites[a].size();
    // fits indexed [family][mu] -> per direction
    std::vector<std::vector<const std::vector<DecayFit>*>> byfm(nf, std::vector<const std::vector<DecayFit>*>(mus.size()));
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t mi = 0; mi < mus.size(); ++mi) byfm[f][mi] = &fits[i++];
    std::vector<std::string> labels;
    for (const auto& fam : suites[a]) labels.push_back(fam.label());
    for (std::size_t d = 0; d < s.dirs.directions.size(); ++d) {
      std::vector<DecayFit> fd;
      for (std::size_t f = 0; f < nf; ++f) fd.push_back((*byfm[f][0])[d]);
      WfSample base = combine_family_fits(PhasePoint{xs[a], s.dirs.directions[d]}, labels, fd);
      base.direction = static_cast<int>(d);
      est.samples.push_back(base);
      for (std::size_t k = 0; k < s.mu_multipliers.size(); ++k) {
        const double mu = s.mu_multipliers[k];
        std::vector<DecayFit> fm;
        for (std::size_t f = 0; f < nf; ++f) {
          if (s.recompute_conic) {
            fm.push_back((*byfm[f][k + 1])[d]);
          } else {
            const DecayFit& b = fd[f];
            fm.push_back(make_fit(scaled_values(b.lambdas, mu), b.magnitudes, b.errors, b.trivial_order, s));
          }
        }
        WfSample w = combine_family_fits(PhasePoint{xs[a], s.dirs.directions[d] * mu}, labels, fm);
        w.direction = static_cast<int>(d);
        w.mu = mu;
        est.samples.push_back(w);
      }
    }
  }
  flag_isolated(est, s.dirs);
  return est;
}

}  // namespace

WavefrontEstimate estimate_wf_classical(const Distribution& u, const std::vector<Point>& xs,
                                        const EstimatorSettings& s) {
  const int m = u.dim();
  if (s.dirs.dim != m) throw Error(ErrorCode::InvalidArgument, "direction set dimension mismatch");
  const auto* kern = u.as<TranslationKernel>();
  const bool kernel_route = kern && kern->n == 2 && kern->d == 1;
  if (kernel_route && s.multiplier)
    throw Error(ErrorCode::InvalidArgument, "window multipliers are not supported for kernel cutoffs");

  std::vector<double> mus{1.0};
  if (s.recompute_conic)
    for (double mu : s.mu_multipliers) mus.push_back(mu);
  const std::size_t nitems = xs.size() * mus.size();
  std::vector<std::vector<DecayFit>> fits(nitems);
  parallel_for(nitems, resolve_threads(s.threads), [&](std::size_t i) {
    const Point& x = xs[i / mus.size()];
    const double mu = mus[i % mus.size()];
    const auto lambdas = scaled_values(s.ladder.values, mu);
    EvalFn eval;
    if (kernel_route) {
      const PairWindow pw{1, s.window_radius, s.window_radius, Point{1.0}};
      eval = [&, pw](double lam, const std::vector<Point>& t) {
        return classical_local_ft_kernel(u, pw, x, lam, t, s.osc);
      };
    } else {
      Window chi = make_bump(x, s.window_radius);
      if (s.multiplier) chi = chi.with_multiplier(*s.multiplier, s.multiplier_label);
      eval = [&, chi](double lam, const std::vector<Point>& t) { return classical_local_ft(u, chi, lam, t, s.osc); };
    }
    const CapTable tab = evaluate_caps(eval, lambdas, caps_for(s.dirs, mu));
    for (std::size_t d = 0; d < tab.mag.size(); ++d) fits[i].push_back(make_fit(lambdas, tab.mag[d], tab.err[d], 0.0, s));
  });

  WavefrontEstimate est;
  est.estimator = EstimatorKind::Classical;
  est.config_digest = s.digest;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t d = 0; d < s.dirs.directions.size(); ++d) {
      const DecayFit& b = fits[a * mus.size()][d];
      WfSample base = combine_family_fits(PhasePoint{xs[a], s.dirs.directions[d]}, {"chi"}, {b});
      base.direction = static_cast<int>(d);
      est.samples.push_back(base);
      for (std::size_t k = 0; k < s.mu_multipliers.size(); ++k) {
        const double mu = s.mu_multipliers[k];
        const DecayFit f = s.recompute_conic ? fits[a * mus.size() + k + 1][d]
                                             : make_fit(scaled_values(b.lambdas, mu), b.magnitudes, b.errors, 0.0, s);
        WfSample w = combine_family_fits(PhasePoint{xs[a], s.dirs.directions[d] * mu}, {"chi"}, {f});
        w.direction = static_cast<int>(d);
        w.mu = mu;
        est.samples.push_back(w);
      }
    }
  }
  flag_isolated(est, s.dirs);
  return est;
}

WavefrontEstimate estimate_wf_scaling(const Distribution& u, const std::vector<Point>& xs,
                                      const EstimatorSettings& s) {
  return scaling_driver(u, xs, s, EstimatorKind::ScalingFamilies, [&](const Point& x) { return suite_at(s, x); });
}

WavefrontEstimate estimate_wf_singlefamily(const Distribution& u, const std::vector<Point>& xs,
                                           const EstimatorSettings& s) {
  const int m = u.dim();
  if (s.p_grid.empty()) throw Error(ErrorCode::BadRange, "empty p grid");
  const double mass = BumpProfile(Point::zeros(m), 1.0).integral();
  const auto g = std::make_shared<BumpProfile>(Point::zeros(m), 1.0, 1.0 / mass);
  const Box O = default_support_region(m);
  return scaling_driver(u, xs, s, EstimatorKind::SingleFamily, [&](const Point& x) {
    std::vector<TestingFamily> fams;
    for (double p : s.p_grid) {
      std::ostringstream os;
      os << "p=" << p;
      fams.push_back(TestingFamily::scaled(g, x, p, O).with_label(os.str()));
    }
    return fams;
  });
}

WavefrontEstimate run_estimator(EstimatorKind kind, const Distribution& u, const std::vector<Point>& xs,
                                const EstimatorSettings& s) {
  switch (kind) {
    case EstimatorKind::Classical: return estimate_wf_classical(u, xs, s);
    case EstimatorKind::ScalingFamilies: return estimate_wf_scaling(u, xs, s);
    default: return estimate_wf_singlefamily(u, xs, s);
  }
}

// ---------------------------------------------------------------- checks

bool RobustnessReport::pass() const {
  for (const auto& r : runs)
    if (r.failures) return false;
  return true;
}

Multiplier named_multiplier(const std::string& name) {
  if (name == "one") return [](const Point&) { return 1.0; };
  if (name == "cos")
    return [](const Point& y) {
      double v = 1.0;
      for (int i = 0; i < y.dim; ++i) v *= 1.0 + 0.5 * std::cos(y[i]);
      return v;
    };
  if (name == "quadratic") return [](const Point& y) { return 1.0 + 0.3 * y[0] - 0.5 * y.dot(y); };
  throw Error(ErrorCode::InvalidArgument, "unknown multiplier: " + name);
}

std::vector<std::string> default_multiplier_names() { return {"cos", "quadratic"}; }

RobustnessReport window_robustness_check(const Distribution& u, const WavefrontEstimate& estimate,
                                         const EstimatorSettings& s, const std::vector<std::string>& multipliers) {
  std::vector<Point> xs;
  for (const auto& smp : estimate.samples)
    if (std::find(xs.begin(), xs.end(), smp.point.x) == xs.end()) xs.push_back(smp.point.x);
  RobustnessReport rep;
  for (const auto& name : multipliers) {
    EstimatorSettings s2 = s;
    s2.multiplier = named_multiplier(name);
    s2.multiplier_label = name;
    s2.dirs = s.dirs.with_cap_radius(0.5 * s.dirs.cap_radius);
    if (!estimate.p_grid.empty()) s2.p_grid = estimate.p_grid;
    const WavefrontEstimate re = run_estimator(estimate.estimator, u, xs, s2);
    FlipReport fr;
    fr.multiplier = name;
    for (const auto& a : estimate.samples) {
      const WfSample* b = re.find(a.point.x, a.point.xi);
      if (!b) continue;
      ++fr.compared;
      if (a.classification != Classification::Regular) continue;
      if (b->classification == Classification::Singular) {
        ++fr.failures;
        fr.failed_points.push_back(a.point);
      } else if (b->classification == Classification::Indeterminate) {
        ++fr.warnings;
      }
    }
    rep.runs.push_back(fr);
  }
  return rep;
}

AgreementReport cross_validate(const std::vector<const WavefrontEstimate*>& estimates) {
  AgreementReport rep;
  const std::size_t n = estimates.size();
  for (const auto* e : estimates) rep.names.push_back(to_string(e->estimator));
  rep.agreement.assign(n, std::vector<double>(n, 1.0));
  if (n == 0) return rep;
  auto indeterminate_near = [&](const WfSample& s) {
    for (const auto* e : estimates) {
      const int nd = static_cast<int>(std::count_if(e->samples.begin(), e->samples.end(), [&](const WfSample& t) {
        return t.point.x == s.point.x && t.mu == s.mu;
      }));
      for (const auto& t : e->samples) {
        if (!(t.point.x == s.point.x) || t.mu != s.mu) continue;
        const int dd = std::abs(t.direction - s.direction);
        const bool neighbour = t.point.xi.dim == 1 || dd <= 1 || dd == nd - 1;
        if (neighbour && t.classification == Classification::Indeterminate) return true;
      }
    }
    return false;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      int decided = 0, agree = 0;
      for (const auto& sa : estimates[a]->samples) {
        const WfSample* sb = estimates[b]->find(sa.point.x, sa.point.xi);
        if (!sb) continue;
        if (sa.classification == Classification::Indeterminate || sb->classification == Classification::Indeterminate)
          continue;
        ++decided;
        if (sa.classification == sb->classification) {
          ++agree;
        } else {
          ++rep.disagreements;
          if (!indeterminate_near(sa)) ++rep.disagreements_not_adjacent;
        }
      }
      rep.decided_pairs += decided;
      rep.agreement[a][b] = rep.agreement[b][a] = decided ? double(agree) / decided : 1.0;
    }
  }
  return rep;
}

GroundTruthReport compare_ground_truth(const WavefrontEstimate& est, const WfDescriptor& truth) {
  GroundTruthReport r;
  for (const auto& s : est.samples) {
    if (truth.singular(s.point.x, s.point.xi)) {
      ++r.singular_points;
      if (s.classification == Classification::Regular) ++r.false_regular;
    } else {
      ++r.regular_points;
      if (s.classification == Classification::Indeterminate) ++r.regular_indeterminate;
      if (s.classification == Classification::Singular) ++r.regular_as_singular;
    }
  }
  return r;
}

CheckCount check_conicity(const WavefrontEstimate& est, const std::vector<double>& mus) {
  CheckCount c;
  for (const auto& s : est.samples) {
    if (s.mu != 1.0) continue;
    for (double mu : mus) {
      ++c.compared;
      const WfSample* t = est.find(s.point.x, s.point.xi * mu);
      if (!t) {
        ++c.mismatches;
        c.details.push_back("missing conic partner at x=" + to_string(s.point.x));
      } else if (t->classification != s.classification) {
        ++c.mismatches;
        c.details.push_back("x=" + to_string(s.point.x) + " xi=" + to_string(s.point.xi) + " differs at mu=" +
                            std::to_string(mu));
      }
    }
  }
  return c;
}

CheckCount check_translation_covariance_wf(const Distribution& u, EstimatorKind kind, const std::vector<Point>& xs,
                                           const EstimatorSettings& s) {
  CheckCount c;
  const WavefrontEstimate a = run_estimator(kind, u, xs, s);
  for (const auto& x : xs) {
    const WavefrontEstimate b = run_estimator(kind, u.shifted(x * -1.0), {Point::zeros(x.dim)}, s);
    for (const auto& sb : b.samples) {
      ++c.compared;
      const WfSample* sa = a.find(x, sb.point.xi);
      if (!sa || sa->classification != sb.classification) {
        ++c.mismatches;
        c.details.push_back("x=" + to_string(x) + " xi=" + to_string(sb.point.xi));
      }
    }
  }
  return c;
}

CheckCount reflection_pairs(const WavefrontEstimate& est) {
  CheckCount c;
  for (const auto& s : est.samples) {
    if (s.mu != 1.0) continue;
    const WfSample* t = est.find(s.point.x, s.point.xi * -1.0);
    if (!t) continue;
    ++c.compared;
    if (t->classification != s.classification) {
      ++c.mismatches;
      c.details.push_back("x=" + to_string(s.point.x) + " xi=" + to_string(s.point.xi));
    }
  }
  return c;
}

CheckCount check_lemma_bound(const std::vector<TestingFamily>& fams, const LambdaLadder& ladder,
                             const std::vector<Point>& ks) {
  CheckCount c;
  for (const auto& f : fams) {
    if (f.kind() != TestingFamily::Kind::ScaledProfile) continue;
    const double cst = f.sup_bound() * f.support_region().volume();
    for (double lam : ladder.values) {
      for (const auto& k : ks) {
        ++c.compared;
        const double v = std::abs(member_ft(f, lam, k));
        const double bound = cst * std::pow(lam, f.dim());
        if (!(v <= bound * (1.0 + 1e-12))) {
          ++c.mismatches;
          c.details.push_back(f.label() + " lambda=" + std::to_string(lam));
        }
      }
    }
  }
  return c;
}

std::vector<ProbeResult> quadrature_probes(const Distribution& u, const std::vector<Point>& xs,
                                           const EstimatorSettings& s, int count, std::uint64_t seed) {
  std::vector<ProbeResult> out;
  if (xs.empty()) return out;
  std::uint64_t state = seed;
  const Window h = make_bump(Point::zeros(u.dim()), s.window_radius);
  for (int i = 0; i < count; ++i) {
    const Point x = xs[static_cast<std::size_t>(uniform01(state) * xs.size())];
    const auto fams = suite_at(s, x);
    const TestingFamily& fam = fams[static_cast<std::size_t>(uniform01(state) * fams.size())];
    const double lam = s.ladder.values[static_cast<std::size_t>(uniform01(state) * s.ladder.size())];
    const Point dir = s.dirs.directions[static_cast<std::size_t>(uniform01(state) * s.dirs.directions.size())];
    const auto cap = s.dirs.cap(dir);
    const Point k = cap[static_cast<std::size_t>(uniform01(state) * cap.size())];
    const TestFunction mem = fam.member(lam);
    const auto a = windowed_scaled_ft_member(u, h, mem, lam, {k}, false, s.osc);
    const auto b = windowed_scaled_ft_member(u, h, mem, lam, {k}, true, s.osc);
    ProbeResult r;
    r.lambda = lam;
    r.x = x;
    r.k = k;
    r.family = fam.label();
    r.fast = a[0].value;
    r.direct = b[0].value;
    r.err_fast = a[0].quadrature_error;
    r.err_direct = b[0].quadrature_error;
    r.pass = std::abs(r.fast - r.direct) <= 10.0 * (r.err_fast + r.err_direct) + 1e-300;
    out.push_back(r);
  }
  return out;
}

}  // namespace microspec
