#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "microspec/core.hpp"
#include "microspec/grid.hpp"

namespace microspec {

class Distribution;
using DistributionPtr = std::shared_ptr<const Distribution>;

struct DeltaAt {
  Point x0;
};
struct DeltaDerivative {
  double x0 = 0.0;
  int order = 1;
};
struct Heaviside {
  double x0 = 0.0;
};
struct PrincipalValue {
  double x0 = 0.0;
};
/// 1/((x - x0) + sign * i0)^power; sign = -1 is 1/(x - x0 - i0).
struct BoundaryValue {
  double x0 = 0.0;
  int sign = -1;
  int power = 1;
};
/// Locally integrable smooth function; `support` bounds where it is non-negligible.
struct SmoothProfile {
  std::shared_ptr<const std::function<double(const Point&)>> f;
  Box support;
  double scale = 1.0;
  std::string name;
};
/// Surface measure of the line {z : normal . z = offset} in R^2.
struct LineDelta2D {
  Point normal;
  double offset = 0.0;
};
struct TensorProduct {
  std::vector<DistributionPtr> factors;
};
/// n-point kernel w(a . (z_1 - z_2)) on (R^d)^n, n <= 2, w a 1-D distribution, a a unit vector in R^d.
/// For n = 1 the functional is w itself (d = 1).
struct TranslationKernel {
  int n = 2;
  int d = 1;
  DistributionPtr w;
  Point ridge;
  std::vector<double> eps_ladder;
  bool hermitean = false;
};
struct Sum {
  std::vector<DistributionPtr> terms;
};

enum class BvMethod { EpsilonExtrapolation, DerivativeReduction };

struct PairingOptions {
  int gl_order = 8;
  BvMethod bv_high_power = BvMethod::EpsilonExtrapolation;
  /// Empty: eps_j = resolution * 2^-j, j = 0..5.
  std::vector<double> eps_ladder;
};

struct PairingResult {
  enum class Method { Analytic, Quadrature, EpsilonExtrapolated };
  cplx value = 0.0;
  Method method = Method::Analytic;
  int order = 0;
  std::vector<double> eps_ladder;
  double error_estimate = 0.0;

  PairingResult& operator+=(const PairingResult& o);
};

/// Hyperplane {normal . z = offset} carrying singular structure.
struct Feature {
  Point normal;
  double offset = 0.0;
};

class Distribution {
 public:
  using Kind = std::variant<DeltaAt, DeltaDerivative, Heaviside, PrincipalValue, BoundaryValue, SmoothProfile,
                            LineDelta2D, TensorProduct, TranslationKernel, Sum>;

  Distribution(Kind kind, int dim, std::string key, cplx coefficient = 1.0);

  const Kind& kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& key() const { return key_; }
  cplx coefficient() const { return coeff_; }
  bool is_real() const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  /// v(z) = u(z - s): singular features move by +s. u o tau_{-x} is shifted(-x).
  Distribution shifted(const Point& s) const;
  Distribution scaled(cplx a) const;
  Distribution with_key(std::string key) const;

  /// Hyperplanes where the distribution is not smooth (empty for smooth kinds).
  std::vector<Feature> features() const;

 private:
  Kind kind_;
  int dim_;
  std::string key_;
  cplx coeff_;
};

// ---- constructors
Distribution delta(double x0);
Distribution delta(const Point& x0);
Distribution delta_derivative(double x0, int order);
Distribution heaviside(double x0);
Distribution principal_value(double x0);
Distribution boundary_value(double x0, int sign, int power = 1);
Distribution smooth_gaussian(const Point& center, double width = 1.0);
Distribution smooth_function(int dim, std::function<double(const Point&)> f, const Box& support, double scale,
                             std::string name);
Distribution line_delta(const Point& normal, double offset = 0.0);
Distribution tensor_product(std::vector<Distribution> factors);
Distribution sum(std::vector<Distribution> terms);
Distribution translation_kernel(int n, int d, Distribution w, const Point& ridge, bool hermitean);

// ---- pairing
/// <u, phi>.
PairingResult pair(const Distribution& u, const TestFunction& phi, const PairingOptions& opt = {});
/// <u, tau_y phi> with (tau_y phi)(z) = phi(z - y).
PairingResult pair_shifted(const Distribution& u, const TestFunction& phi, const Point& y,
                           const PairingOptions& opt = {});

/// Kernel functional on phi_1 (x) ... (x) phi_n by iterated quadrature (outer Gauss-Legendre over phi_1,
/// inner exact distributional pairing of w).
PairingResult kernel_pair_n(const TranslationKernel& k, cplx coefficient, const std::vector<TestFunction>& phis,
                            const PairingOptions& opt = {});
PairingResult kernel_pair_n(const Distribution& kernel, const std::vector<TestFunction>& phis,
                            const PairingOptions& opt = {});
/// Same value via the one-dimensional reduction <w, C_12>, C_12(t) = int P1(t + z) P2(z) dz.
PairingResult kernel_pair_by_correlation(const Distribution& kernel, const std::vector<TestFunction>& phis,
                                         const PairingOptions& opt = {});

/// Projection of a test function on R^d onto the ridge coordinate u = a . z (integrating out a^perp).
TestFunction ridge_projection(const TestFunction& phi, const Point& ridge);
/// Correlation C(t) = int f1(t + z) f2(z) dz of 1-D test functions, tabulated on `points` samples.
TestFunction correlation(const TestFunction& f1, const TestFunction& f2, int points = 2049);
/// Test function z |-> phi(z) e^{-i omega . z}, carrying the oscillation in its bandwidth.
TestFunction modulate(const TestFunction& phi, const Point& omega);

// ---- ground truth (tests and reports only)
struct WfDescriptor {
  std::function<bool(const Point& x, const Point& xi)> singular;
  std::string description;
};
/// Sign of xi at which 1/(x - i0) is singular under the e^{-ik.x} convention.
inline constexpr int kBvMinusSingularSide = -1;

WfDescriptor catalog_ground_truth(const Distribution& u);

// ---- catalog
struct CatalogEntry {
  std::string key;
  std::string description;
};
std::vector<CatalogEntry> list_catalog();
/// Parse a catalog key such as "delta@0", "bv:-i0@0", "pv@0", "line-delta:n=(1,0)", "kernel:bv".
Distribution parse_catalog_key(const std::string& key);

}  // namespace microspec
