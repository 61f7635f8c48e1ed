#include "microspec/acs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace microspec {

std::string to_string(const MultiPhasePoint& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.xs.size(); ++i) os << (i ? "," : "") << to_string(p.xs[i]);
  os << ";";
  for (std::size_t i = 0; i < p.ks.size(); ++i) os << (i ? "," : "") << to_string(p.ks[i]);
  os << ")";
  return os.str();
}

namespace {

bool same_tuple(const std::vector<Point>& a, const std::vector<Point>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].dim != b[i].dim || (a[i] - b[i]).norm() > tol) return false;
  return true;
}

std::vector<double> times(const std::vector<double>& v, double mu) {
  std::vector<double> o(v);
  for (auto& x : o) x *= mu;
  return o;
}

}  // namespace

const AcsSample* AcsEstimate::find(const std::vector<Point>& xs, const std::vector<Point>& ks, double tol) const {
  for (const auto& s : samples)
    if (same_tuple(s.point.xs, xs, tol) && same_tuple(s.point.ks, ks, tol)) return &s;
  return nullptr;
}

DirectionSet acs_direction_set(int n, int d, double cap_radius, int cap_samples) {
  const DirectionSet one = make_direction_set(d, d == 1 ? 2 : 8, cap_radius, cap_samples);
  if (n == 1) return one;
  if (n != 2) throw Error(ErrorCode::InvalidArgument, "ACS order is capped at 2");
  return product_direction_set(one, one);
}

EstimatorSettings default_acs_settings(int n, int d) {
  EstimatorSettings s;
  s.dirs = acs_direction_set(n, d);
  return s;
}

std::vector<std::vector<Point>> with_mirrors(const std::vector<std::vector<Point>>& x_tuples) {
  std::vector<std::vector<Point>> out = x_tuples;
  for (const auto& t : x_tuples) {
    std::vector<Point> r(t.rbegin(), t.rend());
    bool present = false;
    for (const auto& o : out) present = present || same_tuple(o, r, 0.0);
    if (!present) out.push_back(r);
  }
  return out;
}

AcsEstimate estimate_acs(const Distribution& kernel, const std::vector<std::vector<Point>>& x_tuples,
                         const EstimatorSettings& s) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k) throw Error(ErrorCode::InvalidArgument, "estimate_acs needs a translation kernel");
  if (k->n > 2) throw Error(ErrorCode::InvalidArgument, "ACS order is capped at 2");
  const int n = k->n, d = k->d;
  if (s.dirs.dim != n * d) throw Error(ErrorCode::InvalidArgument, "direction set must live in R^{dn}");
  // wider off-ridge and base factors in d = 2: their transforms carry only part of |k|
  const double wide = d == 2 ? 3.0 * s.window_radius : s.window_radius;
  const PairWindow pw{d, s.window_radius, wide, k->ridge, wide};

  std::vector<double> mus{1.0};
  if (s.recompute_conic)
    for (double mu : s.mu_multipliers) mus.push_back(mu);

  // family tuples: the i-th suite member at every point of the tuple
  std::vector<std::vector<std::vector<TestingFamily>>> tuples(x_tuples.size());
  for (std::size_t t = 0; t < x_tuples.size(); ++t) {
    if (static_cast<int>(x_tuples[t].size()) != n) throw Error(ErrorCode::InvalidArgument, "x-tuple arity mismatch");
    std::vector<std::vector<TestingFamily>> per_point;
    for (const auto& x : x_tuples[t]) per_point.push_back(suite_at(s, x));
    for (std::size_t f = 0; f < per_point[0].size(); ++f) {
      std::vector<TestingFamily> tup;
      for (const auto& pp : per_point) tup.push_back(pp.at(f));
      tuples[t].push_back(tup);
    }
  }

  struct Item {
    std::size_t t, f, mi;
  };
  std::vector<Item> items;
  for (std::size_t t = 0; t < tuples.size(); ++t)
    for (std::size_t f = 0; f < tuples[t].size(); ++f)
      for (std::size_t mi = 0; mi < mus.size(); ++mi) items.push_back({t, f, mi});

  std::vector<std::vector<DecayFit>> fits(items.size());
  parallel_for(items.size(), resolve_threads(s.threads), [&](std::size_t i) {
    const Item& it = items[i];
    const double mu = mus[it.mi];
    std::vector<TestingFamily> fams;
    double trivial = 0.0;
    for (const auto& f : tuples[it.t][it.f]) {
      fams.push_back(mu == 1.0 ? f : f.reparametrized(mu));
      trivial += f.trivial_order();
    }
    const auto lambdas = times(s.ladder.values, mu);
    std::vector<Point> targets;
    std::vector<std::size_t> owner;
    for (std::size_t dd = 0; dd < s.dirs.directions.size(); ++dd)
      for (const auto& kk : s.dirs.cap(s.dirs.directions[dd] * mu)) {
        targets.push_back(kk);
        owner.push_back(dd);
      }
    const std::size_t nd = s.dirs.directions.size();
    std::vector<std::vector<double>> mag(nd, std::vector<double>(lambdas.size(), 0.0)), err = mag;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const auto recs = windowed_multi_ft(kernel, pw, fams, lambdas[j], targets, false, s.osc);
      for (std::size_t q = 0; q < recs.size(); ++q) {
        mag[owner[q]][j] = std::max(mag[owner[q]][j], std::abs(recs[q].value));
        err[owner[q]][j] = std::max(err[owner[q]][j], recs[q].quadrature_error);
      }
    }
    for (std::size_t dd = 0; dd < nd; ++dd)
      fits[i].push_back(with_suffix_check(
          polynomial_prefactor_adjust(fit_decay(lambdas, mag[dd], s.thresholds, err[dd]), trivial), s.suffix_drop));
  });

  AcsEstimate est;
  est.n = n;
  est.d = d;
  est.functional_id = kernel.key();
  est.hermitean = k->hermitean;
  std::size_t i = 0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const std::size_t nf = tuples[t].size();
    std::vector<std::vector<const std::vector<DecayFit>*>> byfm(nf, std::vector<const std::vector<DecayFit>*>(mus.size()));
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t mi = 0; mi < mus.size(); ++mi) byfm[f][mi] = &fits[i++];
    std::vector<std::string> labels;
    for (const auto& tup : tuples[t]) labels.push_back(tup[0].label());
    for (std::size_t dd = 0; dd < s.dirs.directions.size(); ++dd) {
      std::vector<double> all_mu{1.0};
      for (double mu : s.mu_multipliers) all_mu.push_back(mu);
      std::vector<DecayFit> base;
      for (std::size_t f = 0; f < nf; ++f) base.push_back((*byfm[f][0])[dd]);
      for (std::size_t q = 0; q < all_mu.size(); ++q) {
        const double mu = all_mu[q];
        std::vector<DecayFit> fm;
        for (std::size_t f = 0; f < nf; ++f) {
          if (q == 0) {
            fm.push_back(base[f]);
          } else if (s.recompute_conic) {
            fm.push_back((*byfm[f][q])[dd]);
          } else {
            const DecayFit& b = base[f];
            fm.push_back(with_suffix_check(
                polynomial_prefactor_adjust(fit_decay(times(b.lambdas, mu), b.magnitudes, s.thresholds, b.errors),
                                            b.trivial_order),
                s.suffix_drop));
          }
        }
        const WfSample w = combine_family_fits(PhasePoint{concat(x_tuples[t]), s.dirs.directions[dd] * mu}, labels, fm);
        AcsSample a;
        a.point.xs = x_tuples[t];
        a.point.ks = split(s.dirs.directions[dd] * mu, n);
        a.direction = static_cast<int>(dd);
        a.mu = mu;
        a.fit = w.fit;
        a.family_labels = w.family_labels;
        a.family_fits = w.family_fits;
        a.classification = w.classification;
        est.samples.push_back(a);
      }
    }
  }
  return est;
}

Distribution shifted_functional(const Distribution& kernel, const Point& s) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k) throw Error(ErrorCode::InvalidArgument, "shifted_functional needs a translation kernel");
  if (k->n >= 2) return kernel;  // translation invariant
  TranslationKernel t = *k;
  t.w = std::make_shared<const Distribution>(k->w->shifted(s * -1.0));
  return Distribution(t, kernel.dim(), kernel.key() + "@shift" + to_string(s), kernel.coefficient());
}

// ---------------------------------------------------------------- cones

double forward_cone_distance(const Point& k) {
  if (k.dim == 1) return std::max(0.0, -k[0]);
  double sp = 0.0;
  for (int i = 1; i < k.dim; ++i) sp += k[i] * k[i];
  sp = std::sqrt(sp);
  if (k[0] >= sp) return 0.0;
  if (k[0] <= -sp) return k.norm();
  return (sp - k[0]) / std::sqrt(2.0);
}

bool cone_membership(const std::vector<Point>& ks, const ConeSpec& cone, double tol) {
  if (static_cast<int>(ks.size()) != cone.n) throw Error(ErrorCode::InvalidArgument, "arity mismatch");
  for (const auto& k : ks)
    if (k.dim != cone.d) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  Point suffix = Point::zeros(cone.d);
  for (int j = cone.n - 1; j >= 0; --j) {
    suffix = suffix + ks[j];
    if (j >= 1 && forward_cone_distance(suffix) > tol) return false;
  }
  return suffix.norm() <= tol;
}

bool properly_acausal(const std::vector<Point>& xs) {
  if (xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "acausality needs at least two points");
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const Point dx = xs[i] - xs[j];
      double sp = 0.0;
      for (int a = 1; a < dx.dim; ++a) sp += dx[a] * dx[a];
      if (!(std::abs(dx[0]) < std::sqrt(sp))) return false;
    }
  return true;
}

ConeReport check_cone_bound(const AcsEstimate& est, const ConeSpec& cone, double tol) {
  ConeReport r;
  for (const auto& s : est.samples) {
    if (s.classification != Classification::Singular) continue;
    ++r.singular;
    // tolerance is relative to the sample's scale
    double scale = 0.0;
    for (const auto& k : s.point.ks) scale += k.dot(k);
    if (!cone_membership(s.point.ks, cone, tol * std::sqrt(scale))) r.violations.push_back(s.point);
  }
  return r;
}

SalientReport salient_cone_filter(const AcsEstimate& est, const std::vector<Point>& x_tuple, const ConePredicate& W,
                                  bool locality) {
  SalientReport r;
  for (const auto& s : est.samples) {
    std::vector<Point> neg;
    for (const auto& k : s.point.ks) neg.push_back(k * -1.0);
    if (W(s.point.ks) && W(neg)) throw Error(ErrorCode::NotSalient, "sampled k and -k both lie in W: " + to_string(s.point));
    if (s.classification == Classification::Singular && !W(s.point.ks)) r.singular_in_w = false;
  }
  r.acausal = x_tuple.size() >= 2 && properly_acausal(x_tuple);
  r.predicts_empty = r.acausal && locality && r.singular_in_w;
  if (r.predicts_empty)
    for (const auto& s : est.samples)
      if (same_tuple(s.point.xs, x_tuple, 1e-12) && s.classification == Classification::Singular)
        r.findings.push_back(s.point);
  return r;
}

SymmetryReport check_hermitean_symmetry(const AcsEstimate& est) {
  SymmetryReport r;
  if (!est.hermitean) {
    r.applicable = false;
    return r;
  }
  for (const auto& s : est.samples) {
    const std::vector<Point> xr(s.point.xs.rbegin(), s.point.xs.rend());
    std::vector<Point> kr;
    for (auto it = s.point.ks.rbegin(); it != s.point.ks.rend(); ++it) kr.push_back(*it * -1.0);
    const AcsSample* m = est.find(xr, kr);
    if (!m) throw Error(ErrorCode::MissingMirrorSample, "no mirror sample for " + to_string(s.point));
    ++r.compared;
    if (m->classification != s.classification) r.asymmetric.push_back(s.point);
  }
  return r;
}

CheckCount check_translation_covariance(const Distribution& kernel, const std::vector<std::vector<Point>>& x_tuples,
                                        const Point& shift, const EstimatorSettings& s) {
  std::vector<std::vector<Point>> moved;
  for (const auto& t : x_tuples) {
    std::vector<Point> m;
    for (const auto& x : t) m.push_back(x + shift);
    moved.push_back(m);
  }
  const AcsEstimate a = estimate_acs(kernel, moved, s);
  const AcsEstimate b = estimate_acs(shifted_functional(kernel, shift), x_tuples, s);
  CheckCount c;
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    ++c.compared;
    if (i >= a.samples.size() || a.samples[i].classification != b.samples[i].classification) {
      ++c.mismatches;
      c.details.push_back(to_string(b.samples[i].point));
    }
  }
  return c;
}

WavefrontEstimate as_wavefront(const AcsEstimate& acs) {
  WavefrontEstimate w;
  w.estimator = EstimatorKind::ScalingFamilies;
  w.config_digest = acs.functional_id;
  for (const auto& s : acs.samples) {
    WfSample x;
    x.point = PhasePoint{concat(s.point.xs), concat(s.point.ks)};
    x.direction = s.direction;
    x.mu = s.mu;
    x.fit = s.fit;
    x.family_labels = s.family_labels;
    x.family_fits = s.family_fits;
    x.classification = s.classification;
    w.samples.push_back(x);
  }
  return w;
}

InclusionReport check_wf_acs_inclusion(const WavefrontEstimate& wf, const AcsEstimate& acs) {
  InclusionReport r;
  const WavefrontEstimate flat = as_wavefront(acs);
  for (const auto& s : wf.samples) {
    if (s.classification != Classification::Singular) continue;
    ++r.wf_singular;
    const WfSample* t = flat.find(s.point.x, s.point.xi);
    if (!t) continue;
    ++r.matched;
    if (t->classification == Classification::Regular) r.violations.push_back(s.point);
  }
  return r;
}

DiagonalReport check_diagonal_singularity(const WavefrontEstimate& kernel_wf, const Point& x) {
  DiagonalReport r;
  const Point xx = concat({x, x});
  for (const auto& s : kernel_wf.samples) {
    if (!(s.point.x == xx) || s.mu != 1.0) continue;
    ++r.directions;
    if (s.classification == Classification::Singular) ++r.singular;
    if (s.classification == Classification::Indeterminate) ++r.indeterminate;
  }
  r.status = r.singular ? Classification::Singular
             : r.indeterminate ? Classification::Indeterminate
                               : Classification::Regular;
  return r;
}

CheckCount check_subadditivity(const WavefrontEstimate& a, const WavefrontEstimate& b, const WavefrontEstimate& sum) {
  CheckCount c;
  for (const auto& s : sum.samples) {
    const WfSample* sa = a.find(s.point.x, s.point.xi);
    const WfSample* sb = b.find(s.point.x, s.point.xi);
    if (!sa || !sb) continue;
    if (sa->classification == Classification::Indeterminate || sb->classification == Classification::Indeterminate)
      continue;
    ++c.compared;
    if (s.classification == Classification::Singular && sa->classification != Classification::Singular &&
        sb->classification != Classification::Singular) {
      ++c.mismatches;
      c.details.push_back("x=" + to_string(s.point.x) + " xi=" + to_string(s.point.xi));
    }
  }
  return c;
}

}  // namespace microspec
