#include "microspec/distribution.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "microspec/quadrature.hpp"

namespace microspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const cplx kI(0.0, 1.0);

struct Accum {
  cplx value = 0.0;
  double abs_sum = 0.0;
};

/// Gauss-Legendre over `breaks`, tracking sum |w f| for a rounding estimate.
template <class F>
Accum gl(const std::vector<double>& breaks, int n, F&& f) {
  const auto& r = quad::gauss_legendre(n);
  Accum acc;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double hm = 0.5 * (b - a), c = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
      const cplx v = f(c + hm * r.x[i]);
      const double w = hm * r.w[i];
      acc.value += w * v;
      acc.abs_sum += w * std::abs(v);
    }
  }
  return acc;
}

PairingResult quadrature_result(const Accum& a, int order) {
  PairingResult r;
  r.value = a.value;
  r.method = PairingResult::Method::Quadrature;
  r.order = order;
  r.error_estimate = 8.0 * kEps * a.abs_sum;
  return r;
}

double lo1(const TestFunction& phi) { return phi.support().lo[0]; }
double hi1(const TestFunction& phi) { return phi.support().hi[0]; }

// ---------------------------------------------------------------- 1-D rules, phi in its own coordinates

PairingResult sift(const TestFunction& phi, double s0, int order) {
  PairingResult r;
  if (s0 < lo1(phi) || s0 > hi1(phi)) return r;
  const double sgn = (order % 2 == 0) ? 1.0 : -1.0;
  r.value = sgn * phi.derivative(s0, order);
  const bool exact = order == 0 || (order == 1 && phi.has_analytic_derivative());
  if (!exact) {
    r.method = PairingResult::Method::Quadrature;
    r.order = 8;
    r.error_estimate = 1e-9 * std::abs(r.value) + 64.0 * kEps * phi.sup_norm() / std::pow(phi.resolution(), order);
  }
  return r;
}

PairingResult half_line(const TestFunction& phi, double s0, int n) {
  const double a = std::max(lo1(phi), s0), b = hi1(phi);
  if (!(b > a)) return quadrature_result({}, n);
  const auto br = quad::uniform_breaks(a, b, phi.resolution());
  return quadrature_result(gl(br, n, [&](double s) { return phi(s); }), n);
}

PairingResult principal_part(const TestFunction& phi, double s0, int n) {
  const double a = lo1(phi), b = hi1(phi), res = phi.resolution();
  if (s0 <= a - res || s0 >= b + res) {
    std::vector<double> pts = quad::uniform_breaks(a, b, res);
    const double dist = s0 < a ? a - s0 : s0 - b;
    if (dist < 8.0 * res) {
      const auto g = s0 < a ? quad::graded_breaks(a, dist, res, b, +1) : quad::graded_breaks(b, dist, res, a, -1);
      pts.insert(pts.end(), g.begin(), g.end());
    }
    const auto br = quad::merge_breaks(pts, a, b);
    return quadrature_result(gl(br, n, [&](double s) { return phi(s) / (s - s0); }), n);
  }
  // symmetric excision of (-eta, eta) with Richardson extrapolation in eta
  const double R = std::max(b - s0, s0 - a);
  const double eta = res / 32.0;
  auto D = [&](double t) { return (phi(s0 + t) - phi(s0 - t)) / t; };
  std::vector<double> pts = quad::uniform_breaks(eta, R, res);
  if (s0 - a > eta && s0 - a < R) pts.push_back(s0 - a);
  if (b - s0 > eta && b - s0 < R) pts.push_back(b - s0);
  const auto br = quad::merge_breaks(pts, eta, R);
  const Accum j0 = gl(br, n, D);
  cplx I[4];
  I[0] = j0.value;
  double e = eta;
  for (int j = 1; j < 4; ++j) {
    I[j] = I[j - 1] + gl(std::vector<double>{e / 2.0, e}, n, D).value;
    e /= 2.0;
  }
  cplx R1[3], R2[2];
  for (int j = 0; j < 3; ++j) R1[j] = 2.0 * I[j + 1] - I[j];
  for (int j = 0; j < 2; ++j) R2[j] = (8.0 * R1[j + 1] - R1[j]) / 7.0;
  const cplx R3 = (32.0 * R2[1] - R2[0]) / 31.0;
  PairingResult r;
  r.value = R3;
  r.method = PairingResult::Method::Quadrature;
  r.order = n;
  r.error_estimate = std::abs(R3 - R2[1]) + 8.0 * kEps * j0.abs_sum;
  return r;
}

PairingResult bv_power_one(const TestFunction& phi, double s0, int sign, int n) {
  PairingResult r = principal_part(phi, s0, n);
  if (s0 >= lo1(phi) && s0 <= hi1(phi)) r.value += -static_cast<double>(sign) * kI * kPi * phi(s0);
  return r;
}

TestFunction derivative_function(const TestFunction& phi, int order) {
  const TestFunction base = phi;
  TestFunction::Fn f = [base, order](const Point& z) { return base.derivative(z[0], order); };
  TestFunction::Fn df;
  if (order < 3) df = [base, order](const Point& z) { return base.derivative(z[0], order + 1); };
  return TestFunction(1, phi.support(), f, df, phi.scale(), phi.bandwidth(),
                      phi.sup_norm() / std::pow(phi.resolution(), order));
}

PairingResult bv_epsilon(const TestFunction& phi, double s0, int sign, int power, const std::vector<double>& ladder,
                         int n) {
  const double a = lo1(phi), b = hi1(phi), res = phi.resolution();
  std::vector<double> eps = ladder;
  if (eps.empty())
    for (int j = 0; j < 6; ++j) eps.push_back(res * std::ldexp(1.0, -j));
  std::vector<cplx> vals;
  double abs_sum = 0.0;
  for (double e : eps) {
    std::vector<double> pts = quad::uniform_breaks(a, b, res);
    if (s0 > a && s0 < b) {
      pts.push_back(s0);
      for (int dir : {+1, -1}) {
        const auto g = quad::graded_breaks(s0, e / 4.0, res, dir > 0 ? b : a, dir);
        pts.insert(pts.end(), g.begin(), g.end());
      }
    }
    const auto br = quad::merge_breaks(pts, a, b);
    const cplx ie = static_cast<double>(sign) * kI * e;
    const Accum acc = gl(br, n, [&](double s) { return phi(s) / std::pow((s - s0) + ie, power); });
    vals.push_back(acc.value);
    abs_sum = std::max(abs_sum, acc.abs_sum);
  }
  const auto diag = quad::neville_to_zero(eps, vals);
  PairingResult r;
  r.value = diag.back();
  r.method = PairingResult::Method::EpsilonExtrapolated;
  r.order = static_cast<int>(eps.size()) - 1;
  r.eps_ladder = eps;
  const double change = std::abs(diag.back() - diag[diag.size() - 2]);
  r.error_estimate = change + 8.0 * kEps * abs_sum;
  const double scale = std::max(std::abs(r.value), 1e3 * kEps * abs_sum);
  if (change > 1e-3 * scale)
    throw Error(ErrorCode::ExtrapolationDiverged, "epsilon ladder failed to converge");
  return r;
}

PairingResult boundary(const TestFunction& phi, double s0, const BoundaryValue& bv, const PairingOptions& opt) {
  if (bv.power == 1) return bv_power_one(phi, s0, bv.sign, opt.gl_order);
  if (opt.bv_high_power == BvMethod::DerivativeReduction) {
    const TestFunction d = derivative_function(phi, bv.power - 1);
    PairingResult r = bv_power_one(d, s0, bv.sign, opt.gl_order);
    double fact = 1.0;
    for (int j = 2; j < bv.power; ++j) fact *= j;
    r.value /= fact;
    r.error_estimate = r.error_estimate / fact + 1e-9 * std::abs(r.value);
    return r;
  }
  return bv_epsilon(phi, s0, bv.sign, bv.power, opt.eps_ladder, opt.gl_order);
}

// diagonal integral C(t) = int phi(t + z, z) dz of a 2-D test function
TestFunction diagonal_integral(const TestFunction& phi) {
  const Box B = phi.support();
  const double a1 = B.lo[0], b1 = B.hi[0], a2 = B.lo[1], b2 = B.hi[1];
  const TestFunction base = phi;
  const double res = phi.resolution();
  TestFunction::Fn f = [base, a1, b1, a2, b2, res](const Point& t) {
    const double lo = std::max(a2, a1 - t[0]), hi = std::min(b2, b1 - t[0]);
    if (!(hi > lo)) return cplx(0.0);
    const auto br = quad::uniform_breaks(lo, hi, res);
    return quad::integrate<cplx>(br, 8, [&](double z) { return base(Point{t[0] + z, z}); });
  };
  Box sup(Point{a1 - b2}, Point{b1 - a2});
  return TestFunction(1, sup, f, {}, phi.scale(), phi.bandwidth() * std::sqrt(2.0),
                      phi.sup_norm() * (b2 - a2));
}

PairingResult pair_impl(const Distribution& u, const TestFunction& phi, const Point& y, const PairingOptions& opt);

struct Visitor {
  const Distribution& u;
  const TestFunction& phi;
  const Point& y;
  const PairingOptions& opt;

  PairingResult operator()(const DeltaAt& k) const {
    PairingResult r;
    r.value = phi(k.x0 - y);
    return r;
  }
  PairingResult operator()(const DeltaDerivative& k) const { return sift(phi, k.x0 - y[0], k.order); }
  PairingResult operator()(const Heaviside& k) const { return half_line(phi, k.x0 - y[0], opt.gl_order); }
  PairingResult operator()(const PrincipalValue& k) const {
    return principal_part(phi, k.x0 - y[0], opt.gl_order);
  }
  PairingResult operator()(const BoundaryValue& k) const { return boundary(phi, k.x0 - y[0], k, opt); }

  PairingResult operator()(const SmoothProfile& k) const {
    const auto& f = *k.f;
    const Box B = phi.support();
    const double h = std::min(phi.resolution(), k.scale / 16.0);
    if (u.dim() == 1) {
      const double a = std::max(B.lo[0], k.support.lo[0] - y[0]);
      const double b = std::min(B.hi[0], k.support.hi[0] - y[0]);
      if (!(b > a)) return quadrature_result({}, opt.gl_order);
      const auto br = quad::uniform_breaks(a, b, h);
      return quadrature_result(
          gl(br, opt.gl_order, [&](double s) { return f(Point{s + y[0]}) * phi(s); }), opt.gl_order);
    }
    if (u.dim() != 2) throw Error(ErrorCode::InvalidArgument, "smooth pairing supports dim 1 and 2");
    double lo[2], hi[2];
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::max(B.lo[i], k.support.lo[i] - y[i]);
      hi[i] = std::min(B.hi[i], k.support.hi[i] - y[i]);
      if (!(hi[i] > lo[i])) return quadrature_result({}, opt.gl_order);
    }
    const auto b0 = quad::uniform_breaks(lo[0], hi[0], h);
    const auto b1 = quad::uniform_breaks(lo[1], hi[1], h);
    Accum total;
    const Accum outer = gl(b0, opt.gl_order, [&](double s0) {
      const Accum in = gl(b1, opt.gl_order, [&](double s1) {
        const Point s{s0, s1};
        return f(s + y) * phi(s);
      });
      total.abs_sum += in.abs_sum;
      return in.value;
    });
    total.value = outer.value;
    return quadrature_result(total, opt.gl_order);
  }

  PairingResult operator()(const LineDelta2D& k) const {
    const Point n = k.normal;
    const Point dir{-n[1], n[0]};
    const Point p0 = n * k.offset - y;
    const Box B = phi.support();
    double tlo = -std::numeric_limits<double>::infinity(), thi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
      if (dir[i] == 0.0) {
        if (p0[i] < B.lo[i] || p0[i] > B.hi[i]) return quadrature_result({}, opt.gl_order);
        continue;
      }
      double t1 = (B.lo[i] - p0[i]) / dir[i], t2 = (B.hi[i] - p0[i]) / dir[i];
      if (t1 > t2) std::swap(t1, t2);
      tlo = std::max(tlo, t1);
      thi = std::min(thi, t2);
    }
    if (!(thi > tlo)) return quadrature_result({}, opt.gl_order);
    const auto br = quad::uniform_breaks(tlo, thi, phi.resolution());
    return quadrature_result(gl(br, opt.gl_order, [&](double t) { return phi(p0 + dir * t); }), opt.gl_order);
  }

  PairingResult operator()(const TensorProduct& k) const {
    if (k.factors.size() != 2 || k.factors[0]->dim() != 1 || k.factors[1]->dim() != 1)
      throw Error(ErrorCode::InvalidArgument, "tensor pairing supports two 1-D factors");
    const Distribution u1 = *k.factors[0], u2 = *k.factors[1];
    const TestFunction base = phi;
    const double y2 = y[1];
    const PairingOptions o = opt;
    const Box B = phi.support();
    TestFunction::Fn F = [base, u2, y2, o, B](const Point& s1) {
      const TestFunction slice(1, Box(Point{B.lo[1]}, Point{B.hi[1]}),
                               [base, s1](const Point& s2) { return base(Point{s1[0], s2[0]}); }, {},
                               base.scale(), base.bandwidth(), base.sup_norm());
      return pair_impl(u2, slice, Point{y2}, o).value;
    };
    const TestFunction Ft(1, Box(Point{B.lo[0]}, Point{B.hi[0]}), F, {}, phi.scale(), phi.bandwidth(),
                          phi.sup_norm());
    return pair_impl(u1, Ft, Point{y[0]}, opt);
  }

  PairingResult operator()(const TranslationKernel& k) const {
    if (k.n == 1) return pair_impl(*k.w, phi, y, opt);
    if (k.d != 1) throw Error(ErrorCode::InvalidArgument, "kernel as a distribution is available for d = 1");
    const TestFunction C = diagonal_integral(phi);
    return pair_impl(*k.w, C, Point{y[0] - y[1]}, opt);
  }

  PairingResult operator()(const Sum& k) const {
    PairingResult r;
    for (const auto& t : k.terms) r += pair_impl(*t, phi, y, opt);
    return r;
  }
};

PairingResult pair_impl(const Distribution& u, const TestFunction& phi, const Point& y, const PairingOptions& opt) {
  if (phi.is_zero()) return {};
  phi.check_resolved();
  PairingResult r = std::visit(Visitor{u, phi, y, opt}, u.kind());
  if (u.coefficient() != 1.0) {
    r.value *= u.coefficient();
    r.error_estimate *= std::abs(u.coefficient());
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- PairingResult

PairingResult& PairingResult::operator+=(const PairingResult& o) {
  value += o.value;
  error_estimate += o.error_estimate;
  if (o.method != Method::Analytic && method == Method::Analytic) {
    method = o.method;
    order = o.order;
    eps_ladder = o.eps_ladder;
  }
  return *this;
}

// ---------------------------------------------------------------- Distribution

Distribution::Distribution(Kind kind, int dim, std::string key, cplx coefficient)
    : kind_(std::move(kind)), dim_(dim), key_(std::move(key)), coeff_(coefficient) {}

bool Distribution::is_real() const {
  if (coeff_.imag() != 0.0) return false;
  if (as<BoundaryValue>()) return false;
  if (const auto* s = as<Sum>()) {
    for (const auto& t : s->terms)
      if (!t->is_real()) return false;
  }
  if (const auto* k = as<TranslationKernel>()) return k->w->is_real();
  if (const auto* t = as<TensorProduct>()) {
    for (const auto& f : t->factors)
      if (!f->is_real()) return false;
  }
  return true;
}

Distribution Distribution::shifted(const Point& s) const {
  Distribution out = *this;
  struct Shift {
    const Point& s;
    int dim;
    void operator()(DeltaAt& k) const { k.x0 = k.x0 + s; }
    void operator()(DeltaDerivative& k) const { k.x0 += s[0]; }
    void operator()(Heaviside& k) const { k.x0 += s[0]; }
    void operator()(PrincipalValue& k) const { k.x0 += s[0]; }
    void operator()(BoundaryValue& k) const { k.x0 += s[0]; }
    void operator()(SmoothProfile& k) const {
      const auto f = k.f;
      const Point sh = s;
      k.f = std::make_shared<const std::function<double(const Point&)>>(
          [f, sh](const Point& z) { return (*f)(z - sh); });
      k.support = k.support.translated(s);
    }
    void operator()(LineDelta2D& k) const { k.offset += k.normal.dot(s); }
    void operator()(TensorProduct& k) const {
      const auto parts = split(s, static_cast<int>(k.factors.size()));
      for (std::size_t i = 0; i < k.factors.size(); ++i)
        k.factors[i] = std::make_shared<const Distribution>(k.factors[i]->shifted(parts[i]));
    }
    void operator()(TranslationKernel& k) const {
      if (k.n == 1) {
        k.w = std::make_shared<const Distribution>(k.w->shifted(s));
        return;
      }
      // w(a.(z1 - z2)) shifted by (s1, s2) is w(a.(z1 - z2) - a.(s1 - s2))
      const auto parts = split(s, 2);
      Point sh(1);
      sh[0] = k.ridge.dot(parts[0] - parts[1]);
      k.w = std::make_shared<const Distribution>(k.w->shifted(sh));
    }
    void operator()(Sum& k) const {
      for (auto& t : k.terms) t = std::make_shared<const Distribution>(t->shifted(s));
    }
  };
  std::visit(Shift{s, dim_}, out.kind_);
  out.key_ = key_ + "+shift" + to_string(s);
  return out;
}

Distribution Distribution::scaled(cplx a) const {
  Distribution out = *this;
  out.coeff_ *= a;
  return out;
}

Distribution Distribution::with_key(std::string key) const {
  Distribution out = *this;
  out.key_ = std::move(key);
  return out;
}

std::vector<Feature> Distribution::features() const {
  std::vector<Feature> out;
  auto point = [&](double x0) { out.push_back(Feature{Point{1.0}, x0}); };
  if (const auto* k = as<DeltaAt>()) {
    for (int i = 0; i < dim_; ++i) {
      Point n(dim_);
      n[i] = 1.0;
      out.push_back(Feature{n, k->x0[i]});
    }
  } else if (const auto* k = as<DeltaDerivative>()) {
    point(k->x0);
  } else if (const auto* k = as<Heaviside>()) {
    point(k->x0);
  } else if (const auto* k = as<PrincipalValue>()) {
    point(k->x0);
  } else if (const auto* k = as<BoundaryValue>()) {
    point(k->x0);
  } else if (const auto* k = as<LineDelta2D>()) {
    out.push_back(Feature{k->normal, k->offset});
  } else if (const auto* k = as<TranslationKernel>()) {
    const auto wf = k->w->features();
    if (k->n == 1) return wf;
    for (const auto& f : wf) {
      Point n(dim_);
      for (int i = 0; i < k->d; ++i) {
        n[i] = k->ridge[i] / std::sqrt(2.0);
        n[k->d + i] = -k->ridge[i] / std::sqrt(2.0);
      }
      out.push_back(Feature{n, f.offset / std::sqrt(2.0)});
    }
  } else if (const auto* k = as<Sum>()) {
    for (const auto& t : k->terms) {
      const auto f = t->features();
      out.insert(out.end(), f.begin(), f.end());
    }
  } else if (const auto* k = as<TensorProduct>()) {
    int off = 0;
    for (const auto& fct : k->factors) {
      for (const auto& f : fct->features()) {
        Point n(dim_);
        for (int i = 0; i < fct->dim(); ++i) n[off + i] = f.normal[i];
        out.push_back(Feature{n, f.offset});
      }
      off += fct->dim();
    }
  }
  return out;
}

// ---------------------------------------------------------------- constructors

namespace {
std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}
}  // namespace

Distribution delta(double x0) { return Distribution(DeltaAt{Point{x0}}, 1, "delta@" + num(x0)); }
Distribution delta(const Point& x0) { return Distribution(DeltaAt{x0}, x0.dim, "delta@" + to_string(x0)); }
Distribution delta_derivative(double x0, int order) {
  if (order < 1 || order > 3) throw Error(ErrorCode::BadRange, "derivative order must be 1..3");
  return Distribution(DeltaDerivative{x0, order}, 1, "delta" + std::string(order, '\'') + "@" + num(x0));
}
Distribution heaviside(double x0) { return Distribution(Heaviside{x0}, 1, "heaviside@" + num(x0)); }
Distribution principal_value(double x0) { return Distribution(PrincipalValue{x0}, 1, "pv@" + num(x0)); }
Distribution boundary_value(double x0, int sign, int power) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::BadRange, "boundary value sign must be +1 or -1");
  if (power < 1) throw Error(ErrorCode::BadRange, "boundary value power must be >= 1");
  const std::string p = power == 1 ? "bv" : "bv" + std::to_string(power);
  return Distribution(BoundaryValue{x0, sign, power}, 1, p + (sign < 0 ? ":-i0@" : ":+i0@") + num(x0));
}

Distribution smooth_function(int dim, std::function<double(const Point&)> f, const Box& support, double scale,
                             std::string name) {
  SmoothProfile s;
  s.f = std::make_shared<const std::function<double(const Point&)>>(std::move(f));
  s.support = support;
  s.scale = scale;
  s.name = name;
  return Distribution(s, dim, "smooth:" + name);
}

Distribution smooth_gaussian(const Point& center, double width) {
  const Point c = center;
  const double w = width;
  Distribution d = smooth_function(
      center.dim, [c, w](const Point& z) { return std::exp(-(z - c).dot(z - c) / (w * w)); },
      Box::cube(center, 7.0 * width), width, "gauss");
  return center.dim == 1 ? d : d.with_key("smooth:gauss2d");
}

Distribution line_delta(const Point& normal, double offset) {
  if (normal.dim != 2) throw Error(ErrorCode::InvalidArgument, "line delta lives in R^2");
  const Point n = normal * (1.0 / normal.norm());
  std::string key = "line-delta:n=(" + num(normal[0]) + "," + num(normal[1]) + ")";
  if (offset != 0.0) key += ",c=" + num(offset);
  return Distribution(LineDelta2D{n, offset}, 2, key);
}

Distribution tensor_product(std::vector<Distribution> factors) {
  TensorProduct t;
  int dim = 0;
  std::string key = "tensor:";
  for (auto& f : factors) {
    dim += f.dim();
    key += (t.factors.empty() ? "" : "|") + f.key();
    t.factors.push_back(std::make_shared<const Distribution>(std::move(f)));
  }
  return Distribution(t, dim, key);
}

Distribution sum(std::vector<Distribution> terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "empty sum");
  Sum s;
  const int dim = terms.front().dim();
  std::string key = "sum:";
  for (auto& t : terms) {
    key += (s.terms.empty() ? "" : "|") + t.key();
    s.terms.push_back(std::make_shared<const Distribution>(std::move(t)));
  }
  return Distribution(s, dim, key);
}

Distribution translation_kernel(int n, int d, Distribution w, const Point& ridge, bool hermitean) {
  if (n < 1 || n > 2) throw Error(ErrorCode::BadRange, "kernel arity must be 1 or 2");
  if (w.dim() != 1) throw Error(ErrorCode::InvalidArgument, "kernel profile w must be 1-D");
  if (ridge.dim != d || std::abs(ridge.norm() - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "ridge must be a unit vector in R^d");
  TranslationKernel k;
  k.n = n;
  k.d = d;
  k.ridge = ridge;
  k.hermitean = hermitean;
  for (int j = 0; j < 6; ++j) k.eps_ladder.push_back(std::ldexp(1e-2, -j));
  const std::string key = "kernel[n=" + std::to_string(n) + ",d=" + std::to_string(d) + "]:" + w.key();
  k.w = std::make_shared<const Distribution>(std::move(w));
  return Distribution(k, n * d, key);
}

// ---------------------------------------------------------------- pairing API

PairingResult pair(const Distribution& u, const TestFunction& phi, const PairingOptions& opt) {
  return pair_impl(u, phi, Point::zeros(u.dim()), opt);
}

PairingResult pair_shifted(const Distribution& u, const TestFunction& phi, const Point& y,
                           const PairingOptions& opt) {
  return pair_impl(u, phi, y, opt);
}

TestFunction ridge_projection(const TestFunction& phi, const Point& ridge) {
  if (phi.dim() == 1) return phi;
  if (phi.dim() != 2) throw Error(ErrorCode::InvalidArgument, "ridge projection supports R^2");
  const Point a = ridge;
  const Point ap{-a[1], a[0]};
  const Box B = phi.support();
  double ulo = 1e300, uhi = -1e300, slo = 1e300, shi = -1e300;
  for (int c = 0; c < 4; ++c) {
    const Point p{(c & 1) ? B.hi[0] : B.lo[0], (c & 2) ? B.hi[1] : B.lo[1]};
    ulo = std::min(ulo, a.dot(p));
    uhi = std::max(uhi, a.dot(p));
    slo = std::min(slo, ap.dot(p));
    shi = std::max(shi, ap.dot(p));
  }
  const TestFunction base = phi;
  const double res = phi.resolution();
  TestFunction::Fn f = [base, a, ap, slo, shi, res](const Point& u) {
    const auto br = quad::uniform_breaks(slo, shi, res);
    return quad::integrate<cplx>(br, 8, [&](double s) { return base(a * u[0] + ap * s); });
  };
  return TestFunction(1, Box(Point{ulo}, Point{uhi}), f, {}, phi.scale(), phi.bandwidth(),
                      phi.sup_norm() * (shi - slo));
}

TestFunction correlation(const TestFunction& f1, const TestFunction& f2, int points) {
  if (f1.dim() != 1 || f2.dim() != 1) throw Error(ErrorCode::InvalidArgument, "correlation of 1-D functions");
  const double a1 = lo1(f1), b1 = hi1(f1), a2 = lo1(f2), b2 = hi1(f2);
  const double lo = a1 - b2, hi = b1 - a2;
  const Grid g(Point{lo}, Point{(hi - lo) / (points - 1)}, {points, 0, 0, 0});
  const double res = std::min(f1.resolution(), f2.resolution());
  std::vector<cplx> vals(points);
  for (int i = 0; i < points; ++i) {
    const double t = g.coord(0, i);
    const double zl = std::max(a2, a1 - t), zh = std::min(b2, b1 - t);
    if (!(zh > zl)) continue;
    const auto br = quad::uniform_breaks(zl, zh, res);
    vals[i] = quad::integrate<cplx>(br, 8, [&](double z) { return f1(t + z) * f2(z); });
  }
  vals.front() = 0.0;
  vals.back() = 0.0;
  return TestFunction::sampled(g, std::move(vals), f1.bandwidth() + f2.bandwidth(), std::min(f1.scale(), f2.scale()));
}

TestFunction modulate(const TestFunction& phi, const Point& omega) {
  const Point om = omega;
  TestFunction::Fn g = [om](const Point& z) { return std::exp(cplx(0.0, -om.dot(z))); };
  TestFunction::Fn dg;
  if (phi.dim() == 1) dg = [om](const Point& z) { return cplx(0.0, -om[0]) * std::exp(cplx(0.0, -om[0] * z[0])); };
  return phi.times(g, dg, om.norm(), 1.0);
}

namespace {

std::vector<TestFunction> projected(const TranslationKernel& k, const std::vector<TestFunction>& phis) {
  std::vector<TestFunction> p;
  for (const auto& f : phis) p.push_back(k.d == 1 ? f : ridge_projection(f, k.ridge));
  return p;
}

}  // namespace

PairingResult kernel_pair_n(const TranslationKernel& k, cplx coefficient, const std::vector<TestFunction>& phis,
                            const PairingOptions& opt) {
  if (static_cast<int>(phis.size()) != k.n) throw Error(ErrorCode::InvalidArgument, "kernel arity mismatch");
  PairingResult r;
  if (k.n == 1) {
    r = pair(*k.w, phis[0], opt);
  } else {
    const auto p = projected(k, phis);
    const TestFunction P1 = p[0], P2 = p[1];
    if (P1.is_zero() || P2.is_zero()) return {};
    // R(t) = P2(-t); <w, tau_{z1} R> = int w(t) P2(z1 - t) dt
    const TestFunction R(1, Box(Point{-hi1(P2)}, Point{-lo1(P2)}),
                         [P2](const Point& t) { return P2(-t[0]); },
                         [P2](const Point& t) { return -P2.derivative(-t[0], 1); }, P2.scale(), P2.bandwidth(),
                         P2.sup_norm());
    const double h = std::min(P1.resolution(), P2.resolution());
    const auto br = quad::uniform_breaks(lo1(P1), hi1(P1), h);
    double max_err = 0.0;
    const Accum acc = gl(br, opt.gl_order, [&](double z1) {
      const cplx f1 = P1(z1);
      if (f1 == 0.0) return cplx(0.0);
      const PairingResult in = pair_impl(*k.w, R, Point{z1}, opt);
      max_err = std::max(max_err, in.error_estimate);
      return f1 * in.value;
    });
    const double l1 = gl(br, opt.gl_order, [&](double z1) { return cplx(std::abs(P1(z1))); }).value.real();
    r.value = acc.value;
    r.method = PairingResult::Method::Quadrature;
    r.order = opt.gl_order;
    r.error_estimate = max_err * l1 + 8.0 * kEps * acc.abs_sum;
  }
  r.value *= coefficient;
  r.error_estimate *= std::abs(coefficient);
  return r;
}

PairingResult kernel_pair_n(const Distribution& kernel, const std::vector<TestFunction>& phis,
                            const PairingOptions& opt) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k) throw Error(ErrorCode::InvalidArgument, "kernel_pair_n needs a translation kernel");
  return kernel_pair_n(*k, kernel.coefficient(), phis, opt);
}

PairingResult kernel_pair_by_correlation(const Distribution& kernel, const std::vector<TestFunction>& phis,
                                         const PairingOptions& opt) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k) throw Error(ErrorCode::InvalidArgument, "kernel_pair_by_correlation needs a translation kernel");
  if (k->n != 2) return kernel_pair_n(kernel, phis, opt);
  const auto p = projected(*k, phis);
  const TestFunction C = correlation(p[0], p[1]);
  PairingResult r = pair(*k->w, C, opt);
  r.value *= kernel.coefficient();
  r.error_estimate *= std::abs(kernel.coefficient());
  return r;
}

// ---------------------------------------------------------------- ground truth

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

WfDescriptor point_feature(double x0, int side, const std::string& what) {
  // side 0: both signs
  return {[x0, side](const Point& x, const Point& xi) {
            if (!close(x[0], x0) || xi[0] == 0.0) return false;
            return side == 0 || (side > 0 ? xi[0] > 0.0 : xi[0] < 0.0);
          },
          what};
}

}  // namespace

WfDescriptor catalog_ground_truth(const Distribution& u) {
  if (const auto* k = u.as<DeltaAt>()) {
    const Point x0 = k->x0;
    return {[x0](const Point& x, const Point& xi) {
              for (int i = 0; i < x0.dim; ++i)
                if (!close(x[i], x0[i])) return false;
              return xi.norm() > 0.0;
            },
            "{(x0, xi) : xi != 0}"};
  }
  if (const auto* k = u.as<DeltaDerivative>()) return point_feature(k->x0, 0, "{(x0, xi) : xi != 0}");
  if (const auto* k = u.as<Heaviside>()) return point_feature(k->x0, 0, "{(x0, xi) : xi != 0}");
  if (const auto* k = u.as<PrincipalValue>()) return point_feature(k->x0, 0, "{(x0, xi) : xi != 0}");
  if (const auto* k = u.as<BoundaryValue>()) {
    const int side = k->sign < 0 ? kBvMinusSingularSide : -kBvMinusSingularSide;
    return point_feature(k->x0, side, side < 0 ? "{(x0, xi) : xi < 0}" : "{(x0, xi) : xi > 0}");
  }
  if (u.as<SmoothProfile>()) return {[](const Point&, const Point&) { return false; }, "empty"};
  if (const auto* k = u.as<LineDelta2D>()) {
    const Point n = k->normal;
    const double c = k->offset;
    return {[n, c](const Point& x, const Point& xi) {
              if (!close(n.dot(x), c)) return false;
              const double cross = xi[0] * n[1] - xi[1] * n[0];
              return xi.norm() > 0.0 && std::abs(cross) <= 1e-9 * xi.norm();
            },
            "{(x, xi) : n.x = c, xi parallel to n}"};
  }
  if (const auto* k = u.as<TranslationKernel>()) {
    const WfDescriptor w = catalog_ground_truth(*k->w);
    if (k->n == 1) return w;
    const int d = k->d;
    const Point a = k->ridge;
    return {[w, d, a](const Point& x, const Point& xi) {
              const auto xs = split(x, 2);
              const auto ks = split(xi, 2);
              const Point tot = ks[0] + ks[1];
              if (tot.norm() > 1e-9 * xi.norm()) return false;
              // k1 must be parallel to the ridge direction
              const double c = ks[0].dot(a);
              if ((ks[0] - a * c).norm() > 1e-9 * xi.norm() || c == 0.0) return false;
              (void)d;
              return w.singular(Point{a.dot(xs[0] - xs[1])}, Point{c});
            },
            "{((x1,x2), (k,-k)) : (a.(x1-x2), a.k) in WF(w)}"};
  }
  if (const auto* k = u.as<Sum>()) {
    std::vector<WfDescriptor> parts;
    for (const auto& t : k->terms) parts.push_back(catalog_ground_truth(*t));
    return {[parts](const Point& x, const Point& xi) {
              for (const auto& p : parts)
                if (p.singular(x, xi)) return true;
              return false;
            },
            "union of summands (disjoint singular sets)"};
  }
  throw Error(ErrorCode::UnknownGroundTruth, "no registered descriptor for " + u.key());
}

// ---------------------------------------------------------------- catalog

std::vector<CatalogEntry> list_catalog() {
  return {
      {"delta@<x>", "Dirac delta at x (1-D; \"delta@(a,b)\" in 2-D)"},
      {"delta'@<x>", "first derivative of delta (delta''@ for second)"},
      {"heaviside@<x>", "step function, 1 for z > x"},
      {"pv@<x>", "principal value 1/(z - x)"},
      {"bv:-i0@<x>", "boundary value 1/(z - x - i0); bv:+i0 for 1/(z - x + i0); bv2: for squared"},
      {"smooth:gauss", "Gaussian exp(-z^2) (smooth:gauss2d in 2-D)"},
      {"line-delta:n=(a,b)[,c=<off>]", "surface delta of the line {n.z = off} in R^2"},
      {"kernel:bv", "2-point kernel -i/(t - i0), t = z1 - z2, d = 1 (hermitean)"},
      {"kernel:bv-plain", "2-point kernel 1/(t - i0), d = 1"},
      {"kernel:delta", "2-point kernel delta(z1 - z2), d = 1"},
      {"kernel:smooth", "2-point kernel exp(-(z1 - z2)^2), d = 1"},
      {"kernel:const", "2-point kernel 1, d = 1"},
      {"kernel:chiral2d", "2-point kernel -1/(u - i0)^2, u = (t0 - t1)/sqrt2, d = 2 (hermitean)"},
      {"sum:<key>|<key>", "sum of catalog entries"},
  };
}

namespace {

Point parse_point(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')') throw Error(ErrorCode::ConfigError, "bad point: " + s);
    t = t.substr(1, t.size() - 2);
  }
  std::vector<double> v;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end == item.c_str()) throw Error(ErrorCode::ConfigError, "bad number in: " + s);
    v.push_back(x);
  }
  if (v.empty()) throw Error(ErrorCode::ConfigError, "empty point: " + s);
  return Point::from(v);
}

}  // namespace

Distribution parse_catalog_key(const std::string& key) {
  auto at = [&](const std::string& prefix) -> std::optional<Point> {
    if (key.rfind(prefix + "@", 0) == 0) return parse_point(key.substr(prefix.size() + 1));
    return std::nullopt;
  };
  if (auto p = at("delta")) return p->dim == 1 ? delta((*p)[0]) : delta(*p);
  if (auto p = at("delta'")) return delta_derivative((*p)[0], 1);
  if (auto p = at("delta''")) return delta_derivative((*p)[0], 2);
  if (auto p = at("heaviside")) return heaviside((*p)[0]);
  if (auto p = at("pv")) return principal_value((*p)[0]);
  if (auto p = at("bv:-i0")) return boundary_value((*p)[0], -1, 1);
  if (auto p = at("bv:+i0")) return boundary_value((*p)[0], +1, 1);
  if (auto p = at("bv2:-i0")) return boundary_value((*p)[0], -1, 2);
  if (auto p = at("bv2:+i0")) return boundary_value((*p)[0], +1, 2);
  if (key == "smooth:gauss") return smooth_gaussian(Point{0.0});
  if (key == "smooth:gauss2d") return smooth_gaussian(Point{0.0, 0.0});
  if (key.rfind("line-delta:n=", 0) == 0) {
    const std::string rest = key.substr(13);
    const auto close_paren = rest.find(')');
    if (close_paren == std::string::npos) throw Error(ErrorCode::ConfigError, "bad line-delta key: " + key);
    const Point n = parse_point(rest.substr(0, close_paren + 1));
    double c = 0.0;
    const auto cpos = rest.find(",c=", close_paren);
    if (cpos != std::string::npos) c = parse_point(rest.substr(cpos + 3))[0];
    return line_delta(n, c).with_key(key);
  }
  const Point one{1.0};
  if (key == "kernel:bv")
    return translation_kernel(2, 1, boundary_value(0.0, -1, 1).scaled(cplx(0.0, -1.0)), one, true).with_key(key);
  if (key == "kernel:bv-plain")
    return translation_kernel(2, 1, boundary_value(0.0, -1, 1), one, false).with_key(key);
  if (key == "kernel:delta") return translation_kernel(2, 1, delta(0.0), one, true).with_key(key);
  if (key == "kernel:smooth") return translation_kernel(2, 1, smooth_gaussian(Point{0.0}), one, true).with_key(key);
  if (key == "kernel:const")
    return translation_kernel(2, 1,
                              smooth_function(
                                  1, [](const Point&) { return 1.0; }, Box(Point{-1e3}, Point{1e3}), 1e3, "const"),
                              one, true)
        .with_key(key);
  if (key == "kernel:chiral2d") {
    const double s = 1.0 / std::sqrt(2.0);
    return translation_kernel(2, 2, boundary_value(0.0, -1, 2).scaled(-1.0), Point{s, -s}, true).with_key(key);
  }
  if (key.rfind("sum:", 0) == 0) {
    std::vector<Distribution> terms;
    std::stringstream ss(key.substr(4));
    std::string item;
    while (std::getline(ss, item, '|')) terms.push_back(parse_catalog_key(item));
    return sum(std::move(terms)).with_key(key);
  }
  throw Error(ErrorCode::ConfigError, "unknown catalog key: " + key);
}

}  // namespace microspec
