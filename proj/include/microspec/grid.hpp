#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "microspec/core.hpp"

namespace microspec {

/// Uniform tensor grid. Coordinates are origin + spacing * index, per axis.
struct Grid {
  int dim = 1;
  Point origin;
  Point spacing;
  std::array<int, kMaxDim> extent{};

  Grid() = default;
  Grid(Point origin, Point spacing, std::array<int, kMaxDim> extent);
  /// Grid with `points` samples per axis covering `box` (endpoints included).
  static Grid covering(const Box& box, int points);

  double coord(int axis, int index) const { return origin[axis] + spacing[axis] * index; }
  Point at(const std::array<int, kMaxDim>& idx) const;
  std::size_t size() const;
  double max_spacing() const;
  Box bounds() const;
};

/// Real smooth profile on R^m with compact support.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual int dim() const = 0;
  virtual double value(const Point& s) const = 0;
  /// First partial derivative along `axis`.
  virtual double derivative(const Point& s, int axis) const = 0;
  virtual Box support() const = 0;
  virtual double sup_norm() const = 0;
  /// Smallest length over which the profile varies appreciably.
  virtual double feature_scale() const = 0;
  virtual std::string name() const = 0;
};

enum class BumpShape { Radial, Product };

/// amplitude * exp(1 - 1/(1 - |s-c|^2/r^2)) (radial) or the product of 1-D bumps.
class BumpProfile final : public Profile {
 public:
  BumpProfile(Point center, double radius, double amplitude = 1.0, BumpShape shape = BumpShape::Radial);
  int dim() const override { return center_.dim; }
  double value(const Point& s) const override;
  double derivative(const Point& s, int axis) const override;
  Box support() const override;
  double sup_norm() const override { return std::abs(amplitude_); }
  double feature_scale() const override { return radius_; }
  std::string name() const override;

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  double amplitude() const { return amplitude_; }
  BumpShape shape() const { return shape_; }
  /// Integral over R^m.
  double integral() const;

 private:
  Point center_;
  double radius_;
  double amplitude_;
  BumpShape shape_;
};

/// The 1-D standard bump exp(1 - 1/(1 - s^2)) on (-1, 1).
double standard_bump(double s);
double standard_bump_derivative(double s);

/// Smooth window h with h(center) = 1 and compact support in the ball of `radius`.
class Window {
 public:
  using Fn = std::function<double(const Point&)>;

  Window() = default;
  Window(int dim, Point center, double radius, Box support, Fn h, std::string name);

  double operator()(const Point& y) const { return h_(y); }
  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const Box& support() const { return support_; }
  const std::string& name() const { return name_; }

  /// Sampled profile on the construction grid (empty for derived windows).
  const Grid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }

  /// phi * h, renormalised so the value at the center is 1.
  Window with_multiplier(const Fn& phi, const std::string& label) const;
  /// a * this + other (no renormalisation; used for linearity checks).
  Window combined(double a, const Window& other) const;
  Window shifted(const Point& s) const;

 private:
  friend Window make_bump(const Point&, double, const Grid&, BumpShape);
  int dim_ = 0;
  Point center_;
  double radius_ = 0.0;
  Box support_;
  Fn h_;
  std::string name_;
  Grid grid_;
  std::vector<double> samples_;
};

Window make_bump(const Point& center, double radius, const Grid& grid, BumpShape shape = BumpShape::Radial);
/// Bump with a default construction grid (33 points per axis over the ball).
Window make_bump(const Point& center, double radius, BumpShape shape = BumpShape::Radial);

struct LambdaLadder {
  double lambda_max = 0.25;
  double ratio = 0.7071067811865476;
  int count = 12;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  /// Every entry multiplied by rho (may leave (0, 1); used for reindexing checks).
  LambdaLadder scaled(double rho) const;
  /// Drop the coarsest `n` entries.
  LambdaLadder suffix(int n) const;
};

LambdaLadder make_ladder(double lambda_max, double ratio, int count);
LambdaLadder default_ladder();

struct DirectionSet {
  int dim = 1;
  std::vector<Point> directions;
  double cap_radius = 0.1;  // relative to |xi|
  int cap_samples = 5;
  bool covering = true;

  /// Sampled k in the cap around `xi` (xi itself first).
  std::vector<Point> cap(const Point& xi) const;
  std::vector<Point> cap(std::size_t i) const { return cap(directions[i]); }
  DirectionSet with_cap_radius(double r) const;
};

DirectionSet make_direction_set(int dim, int n_directions, double cap_radius = 0.1, int cap_samples = 5);
/// Directions in R^{a.dim + b.dim}: (e_a, e_b)/sqrt2 for all pairs plus (e_a, 0) and (0, e_b).
DirectionSet product_direction_set(const DirectionSet& a, const DirectionSet& b);

/// Complex test function with compact support. Either analytic (callable) or sampled on a 1-D grid.
class TestFunction {
 public:
  using Fn = std::function<cplx(const Point&)>;

  TestFunction() = default;
  /// `scale`: smallest feature length; `bandwidth`: largest angular frequency of an oscillatory factor.
  TestFunction(int dim, Box support, Fn f, Fn df, double scale, double bandwidth, double sup_norm);
  /// 1-D samples on `grid` read by 8-point Lagrange interpolation; zero outside the grid.
  static TestFunction sampled(const Grid& grid, std::vector<cplx> values, double bandwidth, double scale = 0.0);
  static TestFunction zero(int dim);

  bool is_zero() const { return zero_; }
  int dim() const { return dim_; }
  cplx operator()(const Point& z) const;
  cplx operator()(double z) const;
  /// d^order/dz^order for 1-D functions (order <= 3).
  cplx derivative(double z, int order) const;
  bool has_analytic_derivative() const { return static_cast<bool>(df_) || !samples_.empty(); }

  const Box& support() const { return support_; }
  double scale() const { return scale_; }
  double bandwidth() const { return bandwidth_; }
  double sup_norm() const { return sup_norm_; }
  /// Panel width used by quadratures of this function.
  double resolution() const;
  /// Throws UnresolvedOscillation if the bandwidth exceeds the Nyquist limit of the sample grid.
  void check_resolved() const;

  /// Multiply by a smooth factor, keeping metadata (bandwidth is added).
  TestFunction times(const Fn& g, const Fn& dg, double extra_bandwidth, double g_sup) const;
  TestFunction scaled(cplx a) const;
  /// a * this + other.
  TestFunction plus(cplx a, const TestFunction& other) const;

 private:
  int dim_ = 1;
  bool zero_ = true;
  Box support_;
  Fn f_, df_;
  double scale_ = 1.0;
  double bandwidth_ = 0.0;
  double sup_norm_ = 0.0;
  Grid grid_;
  std::shared_ptr<const std::vector<cplx>> samples_owner_;
  std::vector<cplx> samples_;
  cplx interpolate(double z, int deriv) const;
};

/// A lambda-indexed family f_lambda with supp f_lambda in lambda*O + x.
class TestingFamily {
 public:
  enum class Kind { ScaledProfile, Tabulated };
  struct Modulation {
    double nu = 0.0;
    double theta = 0.0;
  };

  static TestingFamily scaled(std::shared_ptr<const Profile> g, const Point& anchor, double p, const Box& O);
  /// Members g((x'-x)/lambda) cos(nu_l (x'-x)/lambda + theta_l), one seeded (nu, theta) per ladder entry.
  /// Members vanish identically for lambda > cutoff.
  static TestingFamily modulated(std::shared_ptr<const Profile> g, const Point& anchor, const Box& O,
                                 const std::vector<double>& lambdas, std::uint64_t seed,
                                 double cutoff = std::numeric_limits<double>::infinity());

  Kind kind() const { return kind_; }
  int dim() const { return anchor_.dim; }
  const Point& anchor() const { return anchor_; }
  double exponent() const { return p_; }
  const Box& support_region() const { return O_; }
  double sup_bound() const { return sup_bound_; }
  const Profile& profile() const { return *g_; }
  std::shared_ptr<const Profile> profile_ptr() const { return g_; }
  double mu() const { return mu_; }
  const std::string& label() const { return label_; }

  /// Effective lambda used for the base member (lambda / mu).
  double base_lambda(double lambda) const { return lambda / mu_; }
  bool is_zero(double lambda) const;
  TestFunction member(double lambda) const;
  /// Tight support box of the member: lambda_eff^p supp g + x.
  Box member_support(double lambda) const;
  /// The box lambda*O + x of the support law.
  Box law_box(double lambda) const;
  /// Volume exponent p*m (cf. |f^_lambda| <= c lambda^m).
  double trivial_order() const { return p_ * dim(); }
  /// Modulation at lambda (Tabulated only).
  Modulation modulation(double lambda) const;

  /// Family f'_lambda = f_{lambda/mu}; support region scales to mu*O.
  TestingFamily reparametrized(double mu) const;
  TestingFamily with_anchor(const Point& x) const;
  TestingFamily with_label(std::string label) const;

 private:
  Kind kind_ = Kind::ScaledProfile;
  std::shared_ptr<const Profile> g_;
  Point anchor_;
  double p_ = 1.0;
  Box O_;
  double sup_bound_ = 0.0;
  double mu_ = 1.0;
  double cutoff_ = std::numeric_limits<double>::infinity();
  std::shared_ptr<const std::map<double, Modulation>> table_;
  std::string label_;
};

/// Default p=1 suite: three bump profiles plus one seeded modulated family.
std::vector<TestingFamily> default_family_suite(const Point& anchor, const std::vector<double>& lambdas,
                                                std::uint64_t seed);
/// Default profiles used by the suite (dimension `dim`).
std::vector<std::shared_ptr<const Profile>> default_profiles(int dim);
/// Default support region O: cube of half-width 1.25.
Box default_support_region(int dim);

/// Deterministic uniform in [0, 1) from a 64-bit engine state (splitmix64).
double uniform01(std::uint64_t& state);

}  // namespace microspec
