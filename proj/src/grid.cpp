#include "microspec/grid.hpp"

#include <algorithm>
#include <sstream>

#include "microspec/quadrature.hpp"

namespace microspec {

// ---------------------------------------------------------------- Grid

Grid::Grid(Point o, Point s, std::array<int, kMaxDim> e) : dim(o.dim), origin(o), spacing(s), extent(e) {
  if (dim < 1 || dim > kMaxDim || s.dim != dim) throw Error(ErrorCode::InvalidArgument, "grid dimension");
  for (int i = 0; i < dim; ++i) {
    if (!(s[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
    if (e[i] < 8) throw Error(ErrorCode::InvalidArgument, "grid extent must be >= 8 per axis");
  }
}

Grid Grid::covering(const Box& box, int points) {
  Point sp(box.dim());
  std::array<int, kMaxDim> ext{};
  for (int i = 0; i < box.dim(); ++i) {
    sp[i] = (box.hi[i] - box.lo[i]) / (points - 1);
    ext[i] = points;
  }
  return Grid(box.lo, sp, ext);
}

Point Grid::at(const std::array<int, kMaxDim>& idx) const {
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = coord(i, idx[i]);
  return p;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(extent[i]);
  return n;
}

double Grid::max_spacing() const {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) m = std::max(m, spacing[i]);
  return m;
}

Box Grid::bounds() const {
  Point hi(dim);
  for (int i = 0; i < dim; ++i) hi[i] = coord(i, extent[i] - 1);
  return Box(origin, hi);
}

// ---------------------------------------------------------------- bumps

double standard_bump(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

double standard_bump_derivative(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q) * (-2.0 * s) / (q * q);
}

BumpProfile::BumpProfile(Point center, double radius, double amplitude, BumpShape shape)
    : center_(center), radius_(radius), amplitude_(amplitude), shape_(shape) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadRange, "bump radius must be positive");
}

double BumpProfile::value(const Point& s) const {
  if (shape_ == BumpShape::Radial) {
    double rho2 = 0.0;
    for (int i = 0; i < center_.dim; ++i) {
      const double t = (s[i] - center_[i]) / radius_;
      rho2 += t * t;
    }
    const double q = 1.0 - rho2;
    return q <= 0.0 ? 0.0 : amplitude_ * std::exp(1.0 - 1.0 / q);
  }
  double v = amplitude_;
  for (int i = 0; i < center_.dim && v != 0.0; ++i) v *= standard_bump((s[i] - center_[i]) / radius_);
  return v;
}

double BumpProfile::derivative(const Point& s, int axis) const {
  if (shape_ == BumpShape::Radial) {
    double rho2 = 0.0;
    for (int i = 0; i < center_.dim; ++i) {
      const double t = (s[i] - center_[i]) / radius_;
      rho2 += t * t;
    }
    const double q = 1.0 - rho2;
    if (q <= 0.0) return 0.0;
    const double g = amplitude_ * std::exp(1.0 - 1.0 / q);
    return g * (-2.0 * (s[axis] - center_[axis]) / (radius_ * radius_)) / (q * q);
  }
  double v = amplitude_;
  for (int i = 0; i < center_.dim; ++i) {
    const double t = (s[i] - center_[i]) / radius_;
    v *= (i == axis) ? standard_bump_derivative(t) / radius_ : standard_bump(t);
  }
  return v;
}

Box BumpProfile::support() const { return Box::cube(center_, radius_); }

std::string BumpProfile::name() const {
  std::ostringstream os;
  os << "bump(c=" << to_string(center_) << ",r=" << radius_ << ")";
  return os.str();
}

double BumpProfile::integral() const {
  const auto br = quad::uniform_breaks(0.0, 1.0, 1.0 / 64);
  const int m = center_.dim;
  double base;
  if (shape_ == BumpShape::Product || m == 1) {
    const double i1 = 2.0 * quad::integrate<double>(br, 16, [](double s) { return standard_bump(s); });
    base = std::pow(i1 * radius_, m);
  } else {
    // radial: |S^{m-1}| * int_0^1 rho^{m-1} bump(rho) drho
    const double area = m == 2 ? 2.0 * kPi : (m == 3 ? 4.0 * kPi : 2.0 * kPi * kPi);
    const double ir = quad::integrate<double>(
        br, 16, [m](double r) { return std::pow(r, m - 1) * standard_bump(r); });
    base = area * ir * std::pow(radius_, m);
  }
  return amplitude_ * base;
}

// ---------------------------------------------------------------- Window

Window::Window(int dim, Point center, double radius, Box support, Fn h, std::string name)
    : dim_(dim), center_(center), radius_(radius), support_(support), h_(std::move(h)), name_(std::move(name)) {}

Window make_bump(const Point& center, double radius, const Grid& grid, BumpShape shape) {
  if (grid.dim != center.dim) throw Error(ErrorCode::InvalidArgument, "window/grid dimension mismatch");
  if (!(radius > 2.0 * grid.max_spacing()))
    throw Error(ErrorCode::RadiusTooSmall, "radius must exceed twice the grid spacing");
  const Box ball = Box::cube(center, radius);
  for (int a = 0; a < grid.dim; ++a) {
    int inside = 0;
    for (int i = 0; i < grid.extent[a]; ++i) {
      const double c = grid.coord(a, i);
      if (c > ball.lo[a] && c < ball.hi[a]) ++inside;
    }
    if (inside < 5) throw Error(ErrorCode::RadiusTooSmall, "fewer than 5 grid points inside the support");
  }
  if (!grid.bounds().inflated(1e-12 * radius).contains(ball))
    throw Error(ErrorCode::BadRange, "window ball exceeds the grid extent");

  auto prof = std::make_shared<BumpProfile>(center, radius, 1.0, shape);
  Window w(center.dim, center, radius, ball, [prof](const Point& y) { return prof->value(y); },
           shape == BumpShape::Radial ? "bump" : "product-bump");
  w.grid_ = grid;
  w.samples_.resize(grid.size());
  std::array<int, kMaxDim> idx{};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    std::size_t rem = n;
    for (int a = grid.dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % grid.extent[a]);
      rem /= grid.extent[a];
    }
    w.samples_[n] = prof->value(grid.at(idx));
  }
  return w;
}

Window make_bump(const Point& center, double radius, BumpShape shape) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadRange, "bump radius must be positive");
  return make_bump(center, radius, Grid::covering(Box::cube(center, radius), 33), shape);
}

Window Window::with_multiplier(const Fn& phi, const std::string& label) const {
  const Point c = center_;
  const double phi0 = phi(Point::zeros(dim_));
  if (phi0 == 0.0) throw Error(ErrorCode::InvalidArgument, "multiplier vanishes at the window center");
  Fn base = h_;
  Window w(dim_, center_, radius_, support_,
           [base, phi, c, phi0](const Point& y) {
             const double b = base(y);
             return b == 0.0 ? 0.0 : b * phi(y - c) / phi0;
           },
           name_ + "*" + label);
  return w;
}

Window Window::combined(double a, const Window& other) const {
  Fn f1 = h_, f2 = other.h_;
  Box sup(support_.lo, support_.hi);
  for (int i = 0; i < dim_; ++i) {
    sup.lo[i] = std::min(sup.lo[i], other.support_.lo[i]);
    sup.hi[i] = std::max(sup.hi[i], other.support_.hi[i]);
  }
  return Window(dim_, center_, std::max(radius_, other.radius_), sup,
                [f1, f2, a](const Point& y) { return a * f1(y) + f2(y); }, name_ + "+" + other.name_);
}

Window Window::shifted(const Point& s) const {
  Fn f = h_;
  return Window(dim_, center_ + s, radius_, support_.translated(s), [f, s](const Point& y) { return f(y - s); },
                name_ + "@shift");
}

// ---------------------------------------------------------------- ladder

LambdaLadder make_ladder(double lambda_max, double ratio, int count) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::BadRange, "ladder ratio must lie in (0,1)");
  if (!(lambda_max > 0.0 && lambda_max < 1.0)) throw Error(ErrorCode::BadRange, "lambda_max must lie in (0,1)");
  if (count < 6) throw Error(ErrorCode::BadRange, "ladder needs at least 6 entries");
  LambdaLadder l;
  l.lambda_max = lambda_max;
  l.ratio = ratio;
  l.count = count;
  l.values.resize(count);
  for (int j = 0; j < count; ++j) l.values[j] = lambda_max * std::pow(ratio, j);
  return l;
}

LambdaLadder default_ladder() { return make_ladder(0.25, 1.0 / std::sqrt(2.0), 12); }

LambdaLadder LambdaLadder::scaled(double rho) const {
  LambdaLadder l = *this;
  l.lambda_max *= rho;
  for (double& v : l.values) v *= rho;
  return l;
}

LambdaLadder LambdaLadder::suffix(int n) const {
  LambdaLadder l = *this;
  l.values.erase(l.values.begin(), l.values.begin() + std::min<std::size_t>(n, l.values.size()));
  l.count = static_cast<int>(l.values.size());
  if (!l.values.empty()) l.lambda_max = l.values.front();
  return l;
}

// ---------------------------------------------------------------- directions

std::vector<Point> DirectionSet::cap(const Point& xi) const {
  const double nx = xi.norm();
  const double r = cap_radius * nx;
  const int m = xi.dim;
  // orthonormal frame with xi/|xi| last, tangential vectors first
  std::vector<Point> frame;
  const Point e = xi * (1.0 / nx);
  for (int i = 0; i < m && static_cast<int>(frame.size()) < m - 1; ++i) {
    Point v(m);
    v[i] = 1.0;
    v = v - e * v.dot(e);
    for (const auto& f : frame) v = v - f * v.dot(f);
    const double nv = v.norm();
    if (nv > 1e-8) frame.push_back(v * (1.0 / nv));
  }
  frame.push_back(e);
  std::vector<Point> out{xi};
  for (double scale : {1.0, 0.5}) {
    for (const auto& f : frame) {
      for (double sg : {1.0, -1.0}) {
        if (static_cast<int>(out.size()) >= cap_samples) return out;
        out.push_back(xi + f * (sg * scale * r));
      }
    }
  }
  return out;
}

DirectionSet DirectionSet::with_cap_radius(double r) const {
  DirectionSet d = *this;
  d.cap_radius = r;
  return d;
}

DirectionSet make_direction_set(int dim, int n_directions, double cap_radius, int cap_samples) {
  if (cap_samples < 3) throw Error(ErrorCode::BadRange, "cap_samples must be >= 3");
  if (!(cap_radius > 0.0)) throw Error(ErrorCode::BadRange, "cap radius must be positive");
  DirectionSet d;
  d.dim = dim;
  d.cap_radius = cap_radius;
  d.cap_samples = cap_samples;
  if (dim == 1) {
    if (n_directions != 2) throw Error(ErrorCode::BadRange, "dimension 1 has exactly two directions");
    d.directions = {Point{1.0}, Point{-1.0}};
    d.covering = true;
  } else if (dim == 2) {
    if (n_directions < 2) throw Error(ErrorCode::BadRange, "need at least two directions");
    for (int j = 0; j < n_directions; ++j) {
      const double a = 2.0 * kPi * j / n_directions;
      Point p{std::cos(a), std::sin(a)};
      // snap round-off so axis directions are exact
      for (int i = 0; i < 2; ++i)
        if (std::abs(p[i]) < 1e-15) p[i] = 0.0;
      d.directions.push_back(p);
    }
    d.covering = cap_radius * n_directions >= 2.0 * kPi;
  } else {
    throw Error(ErrorCode::BadRange, "equi-angular sets exist for dim 1 and 2; use product_direction_set");
  }
  return d;
}

DirectionSet product_direction_set(const DirectionSet& a, const DirectionSet& b) {
  DirectionSet d;
  d.dim = a.dim + b.dim;
  d.cap_radius = a.cap_radius;
  d.cap_samples = a.cap_samples;
  d.covering = false;
  const double s = 1.0 / std::sqrt(2.0);
  for (const auto& ea : a.directions)
    for (const auto& eb : b.directions) d.directions.push_back(concat({ea * s, eb * s}));
  for (const auto& ea : a.directions) d.directions.push_back(concat({ea, Point::zeros(b.dim)}));
  for (const auto& eb : b.directions) d.directions.push_back(concat({Point::zeros(a.dim), eb}));
  return d;
}

// ---------------------------------------------------------------- TestFunction

TestFunction::TestFunction(int dim, Box support, Fn f, Fn df, double scale, double bandwidth, double sup_norm)
    : dim_(dim),
      zero_(false),
      support_(support),
      f_(std::move(f)),
      df_(std::move(df)),
      scale_(scale),
      bandwidth_(bandwidth),
      sup_norm_(sup_norm) {}

TestFunction TestFunction::zero(int dim) {
  TestFunction t;
  t.dim_ = dim;
  t.zero_ = true;
  t.support_ = Box(Point::zeros(dim), Point::zeros(dim));
  return t;
}

TestFunction TestFunction::sampled(const Grid& grid, std::vector<cplx> values, double bandwidth, double scale) {
  if (grid.dim != 1) throw Error(ErrorCode::InvalidArgument, "sampled test functions are 1-D");
  if (values.size() != grid.size()) throw Error(ErrorCode::InvalidArgument, "sample count mismatch");
  TestFunction t;
  t.dim_ = 1;
  t.zero_ = false;
  t.grid_ = grid;
  t.support_ = grid.bounds();
  t.scale_ = std::max(scale, 8.0 * grid.spacing[0]);
  t.bandwidth_ = bandwidth;
  double s = 0.0;
  for (const auto& v : values) s = std::max(s, std::abs(v));
  t.sup_norm_ = s;
  t.samples_ = std::move(values);
  t.check_resolved();
  return t;
}

void TestFunction::check_resolved() const {
  if (samples_.empty()) return;
  const double nyq = kPi / grid_.spacing[0];
  if (bandwidth_ > nyq)
    throw Error(ErrorCode::UnresolvedOscillation, "test-function bandwidth exceeds the grid Nyquist limit");
}

cplx TestFunction::interpolate(double z, int deriv) const {
  const double dx = grid_.spacing[0];
  const double u = (z - grid_.origin[0]) / dx;
  const int n = static_cast<int>(samples_.size());
  if (u < -0.5 || u > n - 0.5) return 0.0;
  const int i0 = static_cast<int>(std::floor(u)) - 3;
  cplx acc = 0.0;
  for (int j = 0; j < 8; ++j) {
    const int idx = i0 + j;
    if (idx < 0 || idx >= n) continue;
    const double xj = i0 + j;
    double lj = 1.0, dlj = 0.0;
    // L_j(u) = prod_{m != j} (u - x_m)/(x_j - x_m); derivative by the product rule
    for (int m = 0; m < 8; ++m) {
      if (m == j) continue;
      const double xm = i0 + m;
      const double den = xj - xm;
      dlj = dlj * (u - xm) / den + lj / den;
      lj *= (u - xm) / den;
    }
    acc += samples_[idx] * (deriv == 0 ? lj : dlj / dx);
  }
  return acc;
}

cplx TestFunction::operator()(const Point& z) const {
  if (zero_) return 0.0;
  if (!samples_.empty()) return interpolate(z[0], 0);
  if (!support_.contains(z)) return 0.0;
  return f_(z);
}

cplx TestFunction::operator()(double z) const {
  Point p(1);
  p[0] = z;
  return (*this)(p);
}

double TestFunction::resolution() const {
  double r = scale_ / 16.0;
  if (bandwidth_ > 0.0) r = std::min(r, 1.5 / bandwidth_);
  return r;
}

cplx TestFunction::derivative(double z, int order) const {
  if (zero_) return 0.0;
  if (dim_ != 1) throw Error(ErrorCode::InvalidArgument, "derivative() is 1-D only");
  if (order == 0) return (*this)(z);
  if (order > 3) throw Error(ErrorCode::InvalidArgument, "derivative order > 3 unsupported");
  std::function<cplx(double)> base;
  int rem = order;
  if (!samples_.empty()) {
    base = [this](double t) { return interpolate(t, 1); };
    --rem;
  } else if (df_) {
    base = [this](double t) {
      Point p(1);
      p[0] = t;
      return support_.contains(p) ? df_(p) : cplx(0.0);
    };
    --rem;
  } else {
    base = [this](double t) { return (*this)(t); };
  }
  if (rem == 0) return base(z);
  const double h = 0.25 * resolution();
  static const double c1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  static const double c2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  auto stencil = [&](const double* c, double zz, double p) {
    cplx s = 0.0;
    for (int j = -4; j <= 4; ++j) s += c[j + 4] * base(zz + j * h);
    return s / std::pow(h, p);
  };
  if (rem == 1) return stencil(c1, z, 1);
  if (rem == 2) return stencil(c2, z, 2);
  // rem == 3: first difference of second differences
  cplx s = 0.0;
  for (int j = -4; j <= 4; ++j) s += c1[j + 4] * stencil(c2, z + j * h, 2);
  return s / h;
}

TestFunction TestFunction::times(const Fn& g, const Fn& dg, double extra_bandwidth, double g_sup) const {
  if (zero_) return *this;
  const TestFunction self = *this;
  Fn f = [self, g](const Point& z) { return self(z) * g(z); };
  Fn df;
  if (dim_ == 1 && dg) {
    df = [self, g, dg](const Point& z) { return self.derivative(z[0], 1) * g(z) + self(z) * dg(z); };
  }
  TestFunction t(dim_, support_, f, df, scale_, bandwidth_ + extra_bandwidth, sup_norm_ * g_sup);
  return t;
}

TestFunction TestFunction::scaled(cplx a) const {
  if (zero_) return *this;
  const TestFunction self = *this;
  Fn f = [self, a](const Point& z) { return a * self(z); };
  Fn df;
  if (dim_ == 1) df = [self, a](const Point& z) { return a * self.derivative(z[0], 1); };
  return TestFunction(dim_, support_, f, df, scale_, bandwidth_, std::abs(a) * sup_norm_);
}

TestFunction TestFunction::plus(cplx a, const TestFunction& other) const {
  if (zero_) return other;
  if (other.zero_) return scaled(a);
  const TestFunction s1 = *this, s2 = other;
  Box sup = support_;
  for (int i = 0; i < dim_; ++i) {
    sup.lo[i] = std::min(sup.lo[i], other.support_.lo[i]);
    sup.hi[i] = std::max(sup.hi[i], other.support_.hi[i]);
  }
  Fn f = [s1, s2, a](const Point& z) { return a * s1(z) + s2(z); };
  Fn df;
  if (dim_ == 1)
    df = [s1, s2, a](const Point& z) { return a * s1.derivative(z[0], 1) + s2.derivative(z[0], 1); };
  return TestFunction(dim_, sup, f, df, std::min(scale_, other.scale_), std::max(bandwidth_, other.bandwidth_),
                      std::abs(a) * sup_norm_ + other.sup_norm_);
}

// ---------------------------------------------------------------- TestingFamily

double uniform01(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

TestingFamily TestingFamily::scaled(std::shared_ptr<const Profile> g, const Point& anchor, double p, const Box& O) {
  if (!(p >= 1.0)) throw Error(ErrorCode::BadRange, "family exponent p must be >= 1");
  if (g->dim() != anchor.dim || O.dim() != anchor.dim)
    throw Error(ErrorCode::InvalidArgument, "family dimension mismatch");
  if (!O.contains(g->support())) throw Error(ErrorCode::SupportViolation, "supp g is not inside O");
  TestingFamily f;
  f.kind_ = Kind::ScaledProfile;
  f.g_ = std::move(g);
  f.anchor_ = anchor;
  f.p_ = p;
  f.O_ = O;
  f.sup_bound_ = f.g_->sup_norm();
  f.label_ = f.g_->name();
  return f;
}

TestingFamily TestingFamily::modulated(std::shared_ptr<const Profile> g, const Point& anchor, const Box& O,
                                       const std::vector<double>& lambdas, std::uint64_t seed, double cutoff) {
  TestingFamily f = scaled(std::move(g), anchor, 1.0, O);
  f.kind_ = Kind::Tabulated;
  f.cutoff_ = cutoff;
  auto table = std::make_shared<std::map<double, Modulation>>();
  std::uint64_t state = seed;
  for (double l : lambdas) {
    Modulation m;
    m.nu = 3.0 * uniform01(state);
    m.theta = 2.0 * kPi * uniform01(state);
    (*table)[l] = m;
  }
  f.table_ = table;
  f.label_ = "modulated(" + f.g_->name() + ")";
  return f;
}

bool TestingFamily::is_zero(double lambda) const { return base_lambda(lambda) > cutoff_; }

TestingFamily::Modulation TestingFamily::modulation(double lambda) const {
  if (kind_ != Kind::Tabulated) return {};
  const double l = base_lambda(lambda);
  auto it = table_->lower_bound(l * (1.0 - 1e-9));
  if (it == table_->end() || std::abs(it->first - l) > 1e-9 * l)
    throw Error(ErrorCode::BadRange, "lambda not tabulated in the modulated family");
  return it->second;
}

Box TestingFamily::member_support(double lambda) const {
  const double s = std::pow(base_lambda(lambda), p_);
  return g_->support().scaled(s).translated(anchor_);
}

Box TestingFamily::law_box(double lambda) const { return O_.scaled(lambda).translated(anchor_); }

TestFunction TestingFamily::member(double lambda) const {
  if (is_zero(lambda)) return TestFunction::zero(dim());
  const double le = base_lambda(lambda);
  const double s = p_ == 1.0 ? le : std::pow(le, p_);
  const auto g = g_;
  const Point x = anchor_;
  const Box sup = member_support(lambda);
  const double scale = g->feature_scale() * s;
  if (kind_ == Kind::ScaledProfile) {
    TestFunction::Fn f = [g, x, s](const Point& z) { return cplx(g->value((z - x) * (1.0 / s)), 0.0); };
    TestFunction::Fn df = [g, x, s](const Point& z) { return cplx(g->derivative((z - x) * (1.0 / s), 0) / s, 0.0); };
    return TestFunction(dim(), sup, f, df, scale, 0.0, g->sup_norm());
  }
  const Modulation m = modulation(lambda);
  TestFunction::Fn f = [g, x, s, m](const Point& z) {
    const Point t = (z - x) * (1.0 / s);
    return cplx(g->value(t) * std::cos(m.nu * t[0] + m.theta), 0.0);
  };
  TestFunction::Fn df = [g, x, s, m](const Point& z) {
    const Point t = (z - x) * (1.0 / s);
    const double ph = m.nu * t[0] + m.theta;
    return cplx((g->derivative(t, 0) * std::cos(ph) - g->value(t) * m.nu * std::sin(ph)) / s, 0.0);
  };
  return TestFunction(dim(), sup, f, df, scale, m.nu / s, g->sup_norm());
}

TestingFamily TestingFamily::reparametrized(double mu) const {
  if (!(mu > 0.0)) throw Error(ErrorCode::BadRange, "reparametrization factor must be positive");
  TestingFamily f = *this;
  f.mu_ = mu_ * mu;
  f.O_ = O_.scaled(1.0 / mu);
  return f;
}

TestingFamily TestingFamily::with_anchor(const Point& x) const {
  TestingFamily f = *this;
  f.anchor_ = x;
  return f;
}

TestingFamily TestingFamily::with_label(std::string label) const {
  TestingFamily f = *this;
  f.label_ = std::move(label);
  return f;
}

Box default_support_region(int dim) { return Box::cube(Point::zeros(dim), 1.25); }

std::vector<std::shared_ptr<const Profile>> default_profiles(int dim) {
  return {std::make_shared<BumpProfile>(Point::zeros(dim), 1.0),
          std::make_shared<BumpProfile>(Point::zeros(dim), 0.5),
          std::make_shared<BumpProfile>(Point::filled(dim, 0.4), 0.5)};
}

std::vector<TestingFamily> default_family_suite(const Point& anchor, const std::vector<double>& lambdas,
                                                std::uint64_t seed) {
  const int dim = anchor.dim;
  const Box O = default_support_region(dim);
  std::vector<TestingFamily> out;
  const char* labels[] = {"bump-r1", "bump-r0.5", "bump-offcenter"};
  const auto profiles = default_profiles(dim);
  for (std::size_t i = 0; i < profiles.size(); ++i)
    out.push_back(TestingFamily::scaled(profiles[i], anchor, 1.0, O).with_label(labels[i]));
  out.push_back(TestingFamily::modulated(profiles[0], anchor, O, lambdas, seed).with_label("modulated"));
  return out;
}

}  // namespace microspec
