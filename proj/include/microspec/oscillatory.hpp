#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "microspec/distribution.hpp"
#include "microspec/grid.hpp"

namespace microspec {

struct IntegralRecord {
  double lambda = 0.0;
  Point k;
  cplx value = 0.0;
  double quadrature_error = 0.0;
};

struct OscillatoryOptions {
  int oversampling_q = 4;
  int pad_factor = 8;
  int taylor_order = 12;
  int gl_nodes = 8;
  int zone_panels = 32;
  std::size_t max_grid_points = std::size_t{1} << 22;
  PairingOptions pairing{8, BvMethod::DerivativeReduction, {}};
};

struct OscillatoryPlan {
  Window window;
  Grid y_grid;  // cell centers
  double lambda = 0.0;
  std::vector<Point> k_targets;
  int q = 4;
  std::array<int, kMaxDim> dft_size{};
};

/// Cell grid over supp h obeying spacing <= pi*lambda/(q*max|k|); throws NyquistUnsatisfiable past the cap.
OscillatoryPlan make_plan(const Window& h, double lambda, const std::vector<Point>& k_targets,
                          const OscillatoryOptions& opt = {});

/// Integrand G(y) with an error bound on its value.
using IntegrandFn = std::function<std::pair<cplx, double>(const Point& y)>;

/// Problem description for the cell-moment transform of y |-> G(y) over a window box.
struct TransformProblem {
  Box box;
  /// Per axis: breakpoints of fine structure. Empty: the axis is sampled at cell centers.
  std::vector<std::vector<double>> breaks;
  IntegrandFn G;
  /// Axis along which G is constant up to the window factor (-1: none). G must then be h(y) * P(y_other).
  int invariant_axis = -1;
  std::function<double(const Point&)> window;
  std::function<std::pair<cplx, double>(double)> profile;  // P as a function of the non-invariant coordinate
};

/// int e^{-i k.y / lambda} G(y) dy for every target: moments per cell, padded FFT on the last axis.
std::vector<IntegralRecord> cell_moment_transform(const TransformProblem& prob, const OscillatoryPlan& plan,
                                                  const OscillatoryOptions& opt);
/// Same node set, exact phases, no moments and no FFT.
std::vector<IntegralRecord> direct_transform(const TransformProblem& prob, const OscillatoryPlan& plan,
                                             const OscillatoryOptions& opt);

/// I(lambda, k) = int e^{-i k.y/lambda} h(y) <u, tau_y f_lambda> dy.
std::vector<IntegralRecord> windowed_scaled_ft(const Distribution& u, const Window& h, const TestingFamily& fam,
                                               double lambda, const std::vector<Point>& k_targets,
                                               const OscillatoryOptions& opt = {});
std::vector<IntegralRecord> windowed_scaled_ft_direct(const Distribution& u, const Window& h,
                                                      const TestingFamily& fam, double lambda,
                                                      const std::vector<Point>& k_targets,
                                                      const OscillatoryOptions& opt = {});
/// Same with an explicit member test function (used by the n-point reduction).
std::vector<IntegralRecord> windowed_scaled_ft_member(const Distribution& u, const Window& h,
                                                      const TestFunction& member, double lambda,
                                                      const std::vector<Point>& k_targets, bool direct,
                                                      const OscillatoryOptions& opt = {});

/// chi^u(k/lambda) = u(e_{k/lambda} chi) for every target.
std::vector<IntegralRecord> classical_local_ft(const Distribution& u, const Window& chi, double lambda,
                                               const std::vector<Point>& k_targets,
                                               const OscillatoryOptions& opt = {});

/// Classical transform of a two-point translation kernel (d = 1) on R^2 with the adapted cutoff
/// chi(z) = h(z - x), h a PairWindow: the transform factorizes into a 1-D pairing of w times b^.
std::vector<IntegralRecord> classical_local_ft_kernel(const Distribution& kernel, const struct PairWindow& h,
                                                      const Point& x, double lambda,
                                                      const std::vector<Point>& k_targets,
                                                      const OscillatoryOptions& opt = {});

/// f_lambda^(k / lambda) = int f_lambda(z) e^{-i k.z/lambda} dz.
cplx member_ft(const TestingFamily& fam, double lambda, const Point& k);

/// Fourier transform int e^{-i omega.y} b(y) dy of a window, by Gauss-Legendre quadrature.
cplx window_ft(const Window& b, const Point& omega);

/// Window on R^{2d} for n = 2: h(y1, y2) = B(a.(y1-y2)) B'(a_perp.(y1-y2)) b(y2) (d = 2) or B(y1-y2) b(y2)
/// (d = 1). B, B' and b are standard bumps of the given radii.
struct PairWindow {
  int d = 1;
  double radius_diff = 2.0;
  double radius_base = 2.0;
  Point ridge;
  double radius_perp = 2.0;
  double operator()(const Point& y) const;
};

/// n = 2 ACS integral int e^{-i k.y/lambda} h(y) phi_2(tau_{y1} f1 (x) tau_{y2} f2) dy for translation kernels.
/// n = 1 reduces to windowed_scaled_ft of the kernel profile.
std::vector<IntegralRecord> windowed_multi_ft(const Distribution& kernel, const PairWindow& h,
                                              const std::vector<TestingFamily>& fams, double lambda,
                                              const std::vector<Point>& k_targets, bool direct = false,
                                              const OscillatoryOptions& opt = {});

}  // namespace microspec
