#include "microspec/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace microspec::quad {

namespace {

Rule build_rule(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    r.x[i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  std::reverse(r.x.begin(), r.x.end());
  std::reverse(r.w.begin(), r.w.end());
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, n == 1 ? Rule{{0.0}, {2.0}} : build_rule(n)).first;
  return it->second;
}

std::vector<double> uniform_breaks(double a, double b, double h) {
  if (!(b > a)) return {a, b};
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / h)));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  out[n] = b;
  return out;
}

std::vector<double> merge_breaks(std::vector<double> pts, double a, double b) {
  pts.push_back(a);
  pts.push_back(b);
  std::vector<double> in;
  in.reserve(pts.size());
  for (double p : pts)
    if (p >= a && p <= b) in.push_back(p);
  std::sort(in.begin(), in.end());
  const double tiny = 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
  std::vector<double> out;
  out.reserve(in.size());
  for (double p : in)
    if (out.empty() || p - out.back() > tiny) out.push_back(p);
  if (out.back() != b) out.back() = b;
  if (out.size() < 2) out = {a, b};
  return out;
}

std::vector<double> graded_breaks(double x0, double h0, double h_max, double limit, int dir) {
  std::vector<double> out;
  double h = h0, x = x0;
  while (h < h_max) {
    x += dir * h;
    if ((dir > 0 && x >= limit) || (dir < 0 && x <= limit)) break;
    out.push_back(x);
    h *= 2.0;
  }
  return out;
}

std::vector<cplx> neville_to_zero(const std::vector<double>& t, const std::vector<cplx>& v) {
  const std::size_t n = t.size();
  std::vector<cplx> p = v, diag;
  diag.push_back(p[n - 1]);
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      // interpolate at 0 between p[i] (nodes i..i+m-1) and p[i+1] (nodes i+1..i+m)
      p[i] = (t[i + m] * p[i] - t[i] * p[i + 1]) / (t[i + m] - t[i]);
    }
    diag.push_back(p[n - 1 - m]);
  }
  return diag;
}

}  // namespace microspec::quad
