#pragma once

#include <functional>
#include <vector>

#include "microspec/core.hpp"

namespace microspec::quad {

/// Gauss-Legendre rule on [-1, 1]; cached per order.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

const Rule& gauss_legendre(int n);

/// Breakpoints a = t0 < ... < tN = b with panel width at most `h`.
std::vector<double> uniform_breaks(double a, double b, double h);

/// Sort, clip to [a, b] and drop near-duplicate breakpoints.
std::vector<double> merge_breaks(std::vector<double> pts, double a, double b);

/// Geometric breakpoints growing away from `x0` by factor 2, starting at `h0`, until `h_max`
/// or until `limit` is reached. `dir` is +1 or -1.
std::vector<double> graded_breaks(double x0, double h0, double h_max, double limit, int dir);

template <class T, class F>
T integrate(const std::vector<double>& breaks, int n, F&& f) {
  const Rule& r = gauss_legendre(n);
  T acc{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double hm = 0.5 * (b - a), c = 0.5 * (a + b);
    T s{};
    for (int i = 0; i < n; ++i) s += r.w[i] * f(c + hm * r.x[i]);
    acc += hm * s;
  }
  return acc;
}

/// Neville extrapolation of samples (t_i, v_i) to t = 0. Returns the table diagonal.
std::vector<cplx> neville_to_zero(const std::vector<double>& t, const std::vector<cplx>& v);

}  // namespace microspec::quad
