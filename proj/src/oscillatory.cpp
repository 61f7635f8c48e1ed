#include "microspec/oscillatory.hpp"

#include <fftw3.h>

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

#include "microspec/quadrature.hpp"

namespace microspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

struct AxisNodes {
  int ncell = 0;
  double lo = 0.0, dy = 0.0;
  int J = 0;
  std::vector<int> cell;
  std::vector<double> pos, weight, t;  // t = (y - y_c)/(dy/2)
  double center(int c) const { return lo + (c + 0.5) * dy; }
};

AxisNodes build_axis(double lo, double hi, int ncell, const std::vector<double>& breaks, int gl, int J) {
  AxisNodes ax;
  ax.ncell = ncell;
  ax.lo = lo;
  ax.dy = (hi - lo) / ncell;
  if (breaks.empty()) {
    ax.J = 0;
    for (int c = 0; c < ncell; ++c) {
      ax.cell.push_back(c);
      ax.pos.push_back(ax.center(c));
      ax.weight.push_back(ax.dy);
      ax.t.push_back(0.0);
    }
    return ax;
  }
  ax.J = J;
  const auto& rule = quad::gauss_legendre(gl);
  std::size_t bi = 0;
  for (int c = 0; c < ncell; ++c) {
    const double a = lo + c * ax.dy;
    const double b = c + 1 == ncell ? hi : lo + (c + 1) * ax.dy;
    const double yc = ax.center(c);
    std::vector<double> pts{a};
    while (bi < breaks.size() && breaks[bi] <= a) ++bi;
    std::size_t bj = bi;
    while (bj < breaks.size() && breaks[bj] < b) pts.push_back(breaks[bj++]);
    pts.push_back(b);
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
      const double pa = pts[p], pb = pts[p + 1];
      if (!(pb > pa)) continue;
      const double hm = 0.5 * (pb - pa), cm = 0.5 * (pa + pb);
      for (int i = 0; i < gl; ++i) {
        const double y = cm + hm * rule.x[i];
        ax.cell.push_back(c);
        ax.pos.push_back(y);
        ax.weight.push_back(hm * rule.w[i]);
        ax.t.push_back((y - yc) / (0.5 * ax.dy));
      }
    }
  }
  return ax;
}

/// Evaluated integrand on the tensor node set (sparse in the outer axis when G vanishes).
struct Samples {
  int m = 1;
  AxisNodes ax[2];
  // per outer node index (axis 0 when m == 2; single entry when m == 1): values along the last axis
  std::vector<std::vector<cplx>> g;
  std::vector<std::vector<double>> gerr;
  std::vector<bool> nonzero;
  double abs_mass = 0.0;
  double err_mass = 0.0;
};

constexpr double kEdgeBand[5] = {0.75, 0.875, 1.0, 1.125, 1.25};

/// Largest |sum_c v_c e^{-i phi c}| over phases phi near pi: spectral content at the cell Nyquist edge.
template <class Get>
double edge_content(std::size_t n, Get&& v) {
  constexpr int nb = sizeof(kEdgeBand) / sizeof(kEdgeBand[0]);
  cplx acc[nb], rot[nb], ph[nb];
  for (int b = 0; b < nb; ++b) {
    acc[b] = 0.0;
    ph[b] = 1.0;
    rot[b] = std::exp(cplx(0.0, -kEdgeBand[b] * kPi));
  }
  for (std::size_t c = 0; c < n; ++c) {
    const cplx x = v(c);
    for (int b = 0; b < nb; ++b) {
      acc[b] += x * ph[b];
      ph[b] *= rot[b];
    }
  }
  double e = 0.0;
  for (int b = 0; b < nb; ++b) e = std::max(e, std::abs(acc[b]));
  return e;
}

Samples evaluate(const TransformProblem& prob, const OscillatoryPlan& plan, const OscillatoryOptions& opt) {
  Samples s;
  s.m = prob.box.dim();
  for (int a = 0; a < s.m; ++a) {
    const std::vector<double> br = a < static_cast<int>(prob.breaks.size()) ? prob.breaks[a] : std::vector<double>{};
    s.ax[a] = build_axis(prob.box.lo[a], prob.box.hi[a], plan.y_grid.extent[a], br, opt.gl_nodes, opt.taylor_order);
  }
  const AxisNodes& last = s.ax[s.m - 1];
  const std::size_t n_outer = s.m == 1 ? 1 : s.ax[0].pos.size();
  s.g.assign(n_outer, {});
  s.gerr.assign(n_outer, {});
  s.nonzero.assign(n_outer, false);
  for (std::size_t o = 0; o < n_outer; ++o) {
    std::vector<cplx> row(last.pos.size());
    std::vector<double> rerr(last.pos.size());
    bool any = false;
    if (s.m == 2 && prob.invariant_axis == 1) {
      // G(y) = h(y) P(y0)
      const auto [P, Perr] = prob.profile(s.ax[0].pos[o]);
      if (P != 0.0 || Perr != 0.0) {
        for (std::size_t i = 0; i < last.pos.size(); ++i) {
          const double hv = prob.window(Point{s.ax[0].pos[o], last.pos[i]});
          row[i] = hv * P;
          rerr[i] = std::abs(hv) * Perr;
          any = any || row[i] != 0.0;
        }
      }
    } else {
      for (std::size_t i = 0; i < last.pos.size(); ++i) {
        const Point y = s.m == 1 ? Point{last.pos[i]} : Point{s.ax[0].pos[o], last.pos[i]};
        const auto [v, e] = prob.G(y);
        row[i] = v;
        rerr[i] = e;
        any = any || v != 0.0;
      }
    }
    if (!any) continue;
    const double w0 = s.m == 1 ? 1.0 : s.ax[0].weight[o];
    for (std::size_t i = 0; i < last.pos.size(); ++i) {
      s.abs_mass += w0 * last.weight[i] * std::abs(row[i]);
      s.err_mass += w0 * last.weight[i] * rerr[i];
    }
    s.nonzero[o] = true;
    s.g[o] = std::move(row);
    s.gerr[o] = std::move(rerr);
  }
  return s;
}

double max_abs_k(const std::vector<Point>& ks) {
  double m = 0.0;
  for (const auto& k : ks) m = std::max(m, k.norm());
  return m;
}

/// Barycentric interpolation of equispaced samples f[0..n) at fractional position x (node i at i).
cplx barycentric(const cplx* f, int n, double x) {
  static thread_local std::vector<double> w;
  w.assign(n, 0.0);
  double binom = 1.0;
  for (int i = 0; i < n; ++i) {
    w[i] = (i % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (n - 1 - i) / (i + 1);
  }
  cplx num = 0.0;
  double den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x - i;
    if (d == 0.0) return f[i];
    num += f[i] * (w[i] / d);
    den += w[i] / d;
  }
  return num / den;
}

/// Outer-axis midpoint estimate: content of the row sums at the cell Nyquist edge, shifted by the target.
double outer_alias(const std::vector<std::pair<double, cplx>>& rows, double w0, double dy0) {
  if (rows.empty()) return 0.0;
  double e = 0.0;
  for (double f : kEdgeBand) {
    cplx acc = 0.0;
    for (const auto& [y, v] : rows) acc += v * std::exp(cplx(0.0, -(w0 + f * kPi / dy0) * y));
    e = std::max(e, std::abs(acc));
  }
  return e;
}

double taylor_tail(double rho, int J) {
  double term = 1.0;
  for (int j = 1; j <= J + 1; ++j) term *= rho / j;
  return term * std::exp(rho);
}

}  // namespace

// ---------------------------------------------------------------- plan

OscillatoryPlan make_plan(const Window& h, double lambda, const std::vector<Point>& k_targets,
                          const OscillatoryOptions& opt) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::BadRange, "lambda must be positive");
  if (opt.oversampling_q < 4) throw Error(ErrorCode::BadRange, "oversampling q must be >= 4");
  OscillatoryPlan plan;
  plan.window = h;
  plan.lambda = lambda;
  plan.k_targets = k_targets;
  plan.q = opt.oversampling_q;
  const Box B = h.support();
  const int m = B.dim();
  const double kmax = max_abs_k(k_targets);
  std::size_t total = 1;
  Point origin(m), spacing(m);
  std::array<int, kMaxDim> ext{};
  for (int a = 0; a < m; ++a) {
    const double len = B.hi[a] - B.lo[a];
    double n = 8.0;
    if (kmax > 0.0) n = std::max(n, std::ceil(len / (kPi * lambda / (plan.q * kmax))));
    if (n > static_cast<double>(opt.max_grid_points))
      throw Error(ErrorCode::NyquistUnsatisfiable, "y-grid exceeds the grid-point cap");
    ext[a] = static_cast<int>(n);
    total *= static_cast<std::size_t>(ext[a]);
    if (total > opt.max_grid_points) throw Error(ErrorCode::NyquistUnsatisfiable, "y-grid exceeds the grid-point cap");
    spacing[a] = len / ext[a];
    origin[a] = B.lo[a] + 0.5 * spacing[a];
    plan.dft_size[a] = opt.pad_factor * ext[a];
  }
  plan.y_grid = Grid(origin, spacing, ext);
  return plan;
}

// ---------------------------------------------------------------- transforms

std::vector<IntegralRecord> cell_moment_transform(const TransformProblem& prob, const OscillatoryPlan& plan,
                                                  const OscillatoryOptions& opt) {
  const Samples s = evaluate(prob, plan, opt);
  const int m = s.m;
  const AxisNodes& last = s.ax[m - 1];
  const int J0 = m == 2 ? s.ax[0].J : 0;
  const int J1 = last.J;
  const int N1 = last.ncell;
  const int P1 = opt.pad_factor * N1;
  const int n_outer_cells = m == 2 ? s.ax[0].ncell : 1;

  // moment rows: key outer cell -> block [(j0 * (J1+1) + j1) * P1 + c1]
  std::map<int, std::vector<cplx>> rows;
  const int nplanes = (J0 + 1) * (J1 + 1);
  for (std::size_t o = 0; o < s.g.size(); ++o) {
    if (!s.nonzero[o]) continue;
    const int c0 = m == 2 ? s.ax[0].cell[o] : 0;
    const double w0 = m == 2 ? s.ax[0].weight[o] : 1.0;
    const double t0 = m == 2 ? s.ax[0].t[o] : 0.0;
    auto& blk = rows[c0];
    if (blk.empty()) blk.assign(static_cast<std::size_t>(nplanes) * P1, 0.0);
    double p0 = 1.0;
    for (int j0 = 0; j0 <= J0; ++j0) {
      for (std::size_t i = 0; i < last.pos.size(); ++i) {
        const cplx v = s.g[o][i] * (w0 * last.weight[i] * p0);
        if (v == 0.0) continue;
        double p1 = 1.0;
        cplx* base = blk.data() + static_cast<std::size_t>(j0 * (J1 + 1)) * P1 + last.cell[i];
        for (int j1 = 0; j1 <= J1; ++j1) {
          base[static_cast<std::size_t>(j1) * P1] += v * p1;
          p1 *= last.t[i];
        }
      }
      p0 *= t0;
    }
  }
  (void)n_outer_cells;

  // FFT every plane of every row along the last axis
  if (!rows.empty()) {
    const int howmany = nplanes;
    fftw_plan fp;
    std::vector<cplx> scratch(static_cast<std::size_t>(howmany) * P1);
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fp = fftw_plan_many_dft(1, &P1, howmany, reinterpret_cast<fftw_complex*>(scratch.data()), nullptr, 1, P1,
                              reinterpret_cast<fftw_complex*>(scratch.data()), nullptr, 1, P1, FFTW_FORWARD,
                              FFTW_ESTIMATE);
    }
    for (auto& [c0, blk] : rows)
      fftw_execute_dft(fp, reinterpret_cast<fftw_complex*>(blk.data()), reinterpret_cast<fftw_complex*>(blk.data()));
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fp);
  }

  // midpoint last axis: aliasing bounded by the spectral content near the cell Nyquist edge
  double alias_last = 0.0;
  if (J1 == 0)
    for (const auto& [c0, blk] : rows) {
      double e = 0.0;
      for (long b = 3L * P1 / 8; b <= 5L * P1 / 8; ++b) e = std::max(e, std::abs(blk[static_cast<std::size_t>(b)]));
      alias_last += e;
    }

  const double cmid = 0.5 * (N1 - 1);
  const double dy1 = last.dy;
  std::vector<IntegralRecord> out;
  out.reserve(plan.k_targets.size());
  for (const auto& k : plan.k_targets) {
    IntegralRecord rec;
    rec.lambda = plan.lambda;
    rec.k = k;
    const double w1 = k[m - 1] / plan.lambda;
    const double w0 = m == 2 ? k[0] / plan.lambda : 0.0;
    const double theta = w1 * dy1;
    const double beta = theta * P1 / (2.0 * kPi);
    const long bfl = static_cast<long>(std::floor(beta));
    // Taylor factors (-i w dy/2)^j / j!
    std::vector<cplx> T1(J1 + 1), T0(J0 + 1);
    T1[0] = T0[0] = 1.0;
    for (int j = 1; j <= J1; ++j) T1[j] = T1[j - 1] * cplx(0.0, -w1 * dy1 * 0.5) / static_cast<double>(j);
    for (int j = 1; j <= J0; ++j) T0[j] = T0[j - 1] * cplx(0.0, -w0 * s.ax[0].dy * 0.5) / static_cast<double>(j);
    cplx total = 0.0;
    double interp_err = 0.0;
    std::vector<std::pair<double, cplx>> outer;  // (y0 center, row sum) for the outer midpoint estimate
    cplx win16[16];
    for (const auto& [c0, blk] : rows) {
      cplx row_sum = 0.0;
      double row_err = 0.0;
      for (int j0 = 0; j0 <= J0; ++j0) {
        for (int j1 = 0; j1 <= J1; ++j1) {
          const cplx* F = blk.data() + static_cast<std::size_t>(j0 * (J1 + 1) + j1) * P1;
          for (int i = 0; i < 16; ++i) {
            const long b = bfl - 7 + i;
            const long bm = ((b % P1) + P1) % P1;
            const double thb = 2.0 * kPi * static_cast<double>(b) / P1;
            win16[i] = F[bm] * std::exp(cplx(0.0, thb * cmid));
          }
          const double x = beta - static_cast<double>(bfl - 7);
          const cplx v16 = barycentric(win16, 16, x);
          const cplx v12 = barycentric(win16 + 2, 12, x - 2.0);
          const cplx ph = std::exp(cplx(0.0, -theta * cmid));
          const cplx coef = T0[j0] * T1[j1];
          row_sum += coef * v16 * ph;
          row_err += std::abs(coef) * std::abs(v16 - v12);
        }
      }
      const double y0c = m == 2 ? s.ax[0].center(c0) : 0.0;
      total += std::exp(cplx(0.0, -w0 * y0c)) * row_sum;
      if (m == 2 && J0 == 0) outer.emplace_back(y0c, row_sum);
      interp_err += row_err;
    }
    total *= std::exp(cplx(0.0, -w1 * last.center(0)));
    double trunc = 0.0;
    if (J1 > 0) trunc += taylor_tail(std::abs(w1) * dy1 * 0.5, J1);
    if (J0 > 0) trunc += taylor_tail(std::abs(w0) * s.ax[0].dy * 0.5, J0);
    rec.value = total;
    rec.quadrature_error = interp_err + trunc * s.abs_mass + s.err_mass + (64.0 + 8.0 * std::log2(P1)) * kEps * s.abs_mass +
                           alias_last + outer_alias(outer, w0, m == 2 ? s.ax[0].dy : 1.0);
    out.push_back(rec);
  }
  return out;
}

std::vector<IntegralRecord> direct_transform(const TransformProblem& prob, const OscillatoryPlan& plan,
                                             const OscillatoryOptions& opt) {
  const Samples s = evaluate(prob, plan, opt);
  const int m = s.m;
  const AxisNodes& last = s.ax[m - 1];
  double alias_last = 0.0;
  if (last.J == 0)
    for (std::size_t o = 0; o < s.g.size(); ++o) {
      if (!s.nonzero[o]) continue;
      const double w = (m == 2 ? s.ax[0].weight[o] : 1.0) * last.dy;
      alias_last += w * edge_content(s.g[o].size(), [&](std::size_t c) { return s.g[o][c]; });
    }
  std::vector<IntegralRecord> out;
  for (const auto& k : plan.k_targets) {
    const double w1 = k[m - 1] / plan.lambda;
    const double w0 = m == 2 ? k[0] / plan.lambda : 0.0;
    std::vector<cplx> ph1(last.pos.size());
    for (std::size_t i = 0; i < last.pos.size(); ++i) ph1[i] = std::exp(cplx(0.0, -w1 * last.pos[i]));
    cplx total = 0.0;
    std::vector<std::pair<double, cplx>> outer;
    for (std::size_t o = 0; o < s.g.size(); ++o) {
      if (!s.nonzero[o]) continue;
      cplx row = 0.0;
      for (std::size_t i = 0; i < last.pos.size(); ++i) row += last.weight[i] * s.g[o][i] * ph1[i];
      if (m == 2) {
        row *= s.ax[0].weight[o];
        if (s.ax[0].J == 0) outer.emplace_back(s.ax[0].pos[o], row);
        row *= std::exp(cplx(0.0, -w0 * s.ax[0].pos[o]));
      }
      total += row;
    }
    IntegralRecord rec;
    rec.lambda = plan.lambda;
    rec.k = k;
    rec.value = total;
    rec.quadrature_error = s.err_mass + 64.0 * kEps * s.abs_mass + alias_last +
                           outer_alias(outer, w0, m == 2 ? s.ax[0].dy : 1.0);
    out.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------- windowed scaled FT

namespace {

std::vector<double> zone_breaks(double z0, double z1, double lo, double hi, double dy, int panels) {
  std::vector<double> pts;
  const double width = z1 - z0;
  if (!(width > 0.0)) return pts;
  const double h = width / panels;
  for (int i = 0; i <= panels; ++i) pts.push_back(z0 + width * i / panels);
  auto g1 = quad::graded_breaks(z1, h, dy, hi, +1);
  auto g2 = quad::graded_breaks(z0, h, dy, lo, -1);
  pts.insert(pts.end(), g1.begin(), g1.end());
  pts.insert(pts.end(), g2.begin(), g2.end());
  std::vector<double> in;
  for (double p : pts)
    if (p > lo && p < hi) in.push_back(p);
  return in;
}

TransformProblem scaled_problem(const Distribution& u, const Window& h, const TestFunction& member,
                                const OscillatoryPlan& plan, const OscillatoryOptions& opt) {
  const int m = u.dim();
  if (h.dim() != m || member.dim() != m) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  TransformProblem prob;
  prob.box = h.support();
  prob.breaks.assign(m, {});
  const Box MS = member.support();
  bool normal_axis[kMaxDim] = {false, false, false, false};
  for (const auto& f : u.features()) {
    int axis = -1;
    double sgn = 0.0;
    for (int a = 0; a < m; ++a) {
      if (f.normal[a] != 0.0) {
        if (axis >= 0) throw Error(ErrorCode::InvalidArgument, "oblique features are not supported by this pipeline");
        axis = a;
        sgn = f.normal[a] > 0 ? 1.0 : -1.0;
      }
    }
    if (axis < 0) continue;
    normal_axis[axis] = true;
    const double zc = sgn * f.offset / std::abs(f.normal[axis]);
    const double z0 = zc - MS.hi[axis], z1 = zc - MS.lo[axis];
    const double lo = prob.box.lo[axis], hi = prob.box.hi[axis];
    const double dy = plan.y_grid.spacing[axis];
    if (z1 < lo - 4.0 * dy || z0 > hi + 4.0 * dy) continue;
    auto br = zone_breaks(z0, z1, lo, hi, dy, opt.zone_panels);
    if (br.empty()) br.push_back(0.5 * (lo + hi));
    prob.breaks[axis].insert(prob.breaks[axis].end(), br.begin(), br.end());
  }
  for (auto& b : prob.breaks) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  const Distribution uu = u;
  const TestFunction mem = member;
  const Window hh = h;
  const PairingOptions po = opt.pairing;
  prob.G = [uu, mem, hh, po](const Point& y) -> std::pair<cplx, double> {
    const double hv = hh(y);
    if (hv == 0.0) return {0.0, 0.0};
    const PairingResult r = pair_shifted(uu, mem, y, po);
    return {hv * r.value, std::abs(hv) * r.error_estimate};
  };
  // line distributions are invariant along their tangent
  if (m == 2 && u.as<LineDelta2D>() && normal_axis[0] && !normal_axis[1]) {
    prob.invariant_axis = 1;
    prob.window = [hh](const Point& y) { return hh(y); };
    prob.profile = [uu, mem, po](double y0) -> std::pair<cplx, double> {
      const PairingResult r = pair_shifted(uu, mem, Point{y0, 0.0}, po);
      return {r.value, r.error_estimate};
    };
  }
  return prob;
}

}  // namespace

std::vector<IntegralRecord> windowed_scaled_ft_member(const Distribution& u, const Window& h,
                                                      const TestFunction& member, double lambda,
                                                      const std::vector<Point>& k_targets, bool direct,
                                                      const OscillatoryOptions& opt) {
  if (member.is_zero()) {
    std::vector<IntegralRecord> out;
    for (const auto& k : k_targets) out.push_back(IntegralRecord{lambda, k, 0.0, 0.0});
    return out;
  }
  const OscillatoryPlan plan = make_plan(h, lambda, k_targets, opt);
  const TransformProblem prob = scaled_problem(u, h, member, plan, opt);
  return direct ? direct_transform(prob, plan, opt) : cell_moment_transform(prob, plan, opt);
}

std::vector<IntegralRecord> windowed_scaled_ft(const Distribution& u, const Window& h, const TestingFamily& fam,
                                               double lambda, const std::vector<Point>& k_targets,
                                               const OscillatoryOptions& opt) {
  return windowed_scaled_ft_member(u, h, fam.member(lambda), lambda, k_targets, false, opt);
}

std::vector<IntegralRecord> windowed_scaled_ft_direct(const Distribution& u, const Window& h,
                                                      const TestingFamily& fam, double lambda,
                                                      const std::vector<Point>& k_targets,
                                                      const OscillatoryOptions& opt) {
  return windowed_scaled_ft_member(u, h, fam.member(lambda), lambda, k_targets, true, opt);
}

// ---------------------------------------------------------------- classical

std::vector<IntegralRecord> classical_local_ft(const Distribution& u, const Window& chi, double lambda,
                                               const std::vector<Point>& k_targets, const OscillatoryOptions& opt) {
  const Window w = chi;
  const TestFunction base(chi.dim(), chi.support(), [w](const Point& z) { return cplx(w(z), 0.0); }, {},
                          chi.radius(), 0.0, 1.0);
  std::vector<IntegralRecord> out;
  for (const auto& k : k_targets) {
    const PairingResult r = pair(u, modulate(base, k * (1.0 / lambda)), opt.pairing);
    out.push_back(IntegralRecord{lambda, k, r.value, r.error_estimate});
  }
  return out;
}

// ---------------------------------------------------------------- window transforms

namespace {

cplx bump_ft_1d_raw(double radius, double omega) {
  const double h = std::min(radius / 32.0, 1.5 / std::max(std::abs(omega), 1e-300));
  const auto br = quad::uniform_breaks(-radius, radius, h);
  return quad::integrate<cplx>(br, 8, [&](double y) {
    return standard_bump(y / radius) * std::exp(cplx(0.0, -omega * y));
  });
}

double bump_ft_2d_radial_raw(double radius, double omega) {
  const double h = std::min(radius / 32.0, 1.5 / std::max(omega, 1e-300));
  const auto br = quad::uniform_breaks(0.0, radius, h);
  return 2.0 * kPi * quad::integrate<double>(br, 8, [&](double r) {
    return r * standard_bump(r / radius) * std::cyl_bessel_j(0.0, omega * r);
  });
}

// the same transforms recur for every family and ladder entry
cplx bump_ft_1d(double radius, double omega) {
  thread_local std::map<std::pair<double, double>, cplx> cache;
  const auto key = std::make_pair(radius, omega);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > (1u << 16)) cache.clear();
  return cache[key] = bump_ft_1d_raw(radius, omega);
}

double bump_ft_2d_radial(double radius, double omega) {
  thread_local std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(radius, omega);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > (1u << 16)) cache.clear();
  return cache[key] = bump_ft_2d_radial_raw(radius, omega);
}

}  // namespace

cplx window_ft(const Window& b, const Point& omega) {
  const Box B = b.support();
  const int m = B.dim();
  const double om = omega.norm();
  const double h = std::min(b.radius() / 32.0, om > 0.0 ? 1.5 / om : 1e300);
  if (m == 1) {
    const auto br = quad::uniform_breaks(B.lo[0], B.hi[0], h);
    return quad::integrate<cplx>(br, 8, [&](double y) {
      return b(Point{y}) * std::exp(cplx(0.0, -omega[0] * y));
    });
  }
  if (m != 2) throw Error(ErrorCode::InvalidArgument, "window_ft supports dim 1 and 2");
  const auto b0 = quad::uniform_breaks(B.lo[0], B.hi[0], h);
  const auto b1 = quad::uniform_breaks(B.lo[1], B.hi[1], h);
  return quad::integrate<cplx>(b0, 8, [&](double y0) {
    return quad::integrate<cplx>(b1, 8, [&](double y1) {
      return b(Point{y0, y1}) * std::exp(cplx(0.0, -(omega[0] * y0 + omega[1] * y1)));
    });
  });
}

double PairWindow::operator()(const Point& y) const {
  const auto ys = split(y, 2);
  const Point D = ys[0] - ys[1];
  double v;
  if (d == 1) {
    v = standard_bump(D[0] / radius_diff) * standard_bump(ys[1][0] / radius_base);
  } else {
    const Point ap{-ridge[1], ridge[0]};
    v = standard_bump(ridge.dot(D) / radius_diff) * standard_bump(ap.dot(D) / radius_perp) *
        standard_bump(ys[1].norm() / radius_base);
  }
  return v;
}

// ---------------------------------------------------------------- n-point

namespace {

TestFunction tabulate(const TestFunction& f, int points) {
  const double lo = f.support().lo[0], hi = f.support().hi[0];
  const Grid g(Point{lo}, Point{(hi - lo) / (points - 1)}, {points, 0, 0, 0});
  std::vector<cplx> v(points);
  for (int i = 1; i + 1 < points; ++i) v[i] = f(g.coord(0, i));
  return TestFunction::sampled(g, std::move(v), f.bandwidth(), f.scale());
}

}  // namespace

std::vector<IntegralRecord> windowed_multi_ft(const Distribution& kernel, const PairWindow& h,
                                              const std::vector<TestingFamily>& fams, double lambda,
                                              const std::vector<Point>& k_targets, bool direct,
                                              const OscillatoryOptions& opt) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k) throw Error(ErrorCode::InvalidArgument, "windowed_multi_ft needs a translation kernel");
  if (static_cast<int>(fams.size()) != k->n) throw Error(ErrorCode::InvalidArgument, "family count != arity");
  const Distribution w = k->w->scaled(kernel.coefficient());
  const Window B = make_bump(Point{0.0}, h.radius_diff);
  if (k->n == 1) return windowed_scaled_ft_member(w, B, fams[0].member(lambda), lambda, k_targets, direct, opt);

  std::vector<IntegralRecord> out;
  const TestFunction f1 = fams[0].member(lambda), f2 = fams[1].member(lambda);
  if (f1.is_zero() || f2.is_zero()) {
    for (const auto& kk : k_targets) out.push_back(IntegralRecord{lambda, kk, 0.0, 0.0});
    return out;
  }
  TestFunction P1 = f1, P2 = f2;
  if (k->d == 2) {
    P1 = tabulate(ridge_projection(f1, k->ridge), 2049);
    P2 = tabulate(ridge_projection(f2, k->ridge), 2049);
  }
  const TestFunction C = correlation(P1, P2);
  const int d = k->d;
  const Point a = k->ridge;
  const Point ap = d == 2 ? Point{-a[1], a[0]} : Point{};
  // one transform along the ridge coordinate serves every target
  std::vector<Point> ridge_targets;
  for (const auto& kk : k_targets) {
    const auto ks = split(kk, 2);
    ridge_targets.push_back(Point{d == 1 ? ks[0][0] : a.dot(ks[0])});
  }
  const auto ridge_recs = windowed_scaled_ft_member(w, B, C, lambda, ridge_targets, direct, opt);
  for (std::size_t i = 0; i < k_targets.size(); ++i) {
    const auto ks = split(k_targets[i], 2);
    const Point kappa = (ks[0] + ks[1]) * (1.0 / lambda);
    cplx factor = d == 1 ? bump_ft_1d(h.radius_base, kappa[0]) : cplx(bump_ft_2d_radial(h.radius_base, kappa.norm()));
    if (d == 2) factor *= bump_ft_1d(h.radius_perp, ap.dot(ks[0]) / lambda);
    IntegralRecord rec;
    rec.lambda = lambda;
    rec.k = k_targets[i];
    rec.value = ridge_recs[i].value * factor;
    rec.quadrature_error = ridge_recs[i].quadrature_error * std::abs(factor) + 64.0 * kEps * std::abs(rec.value);
    out.push_back(rec);
  }
  return out;
}

std::vector<IntegralRecord> classical_local_ft_kernel(const Distribution& kernel, const PairWindow& h,
                                                      const Point& x, double lambda,
                                                      const std::vector<Point>& k_targets,
                                                      const OscillatoryOptions& opt) {
  const auto* k = kernel.as<TranslationKernel>();
  if (!k || k->n != 2 || k->d != 1) throw Error(ErrorCode::InvalidArgument, "adapted cutoff needs a 2-point kernel, d = 1");
  const Distribution w = k->w->scaled(kernel.coefficient());
  const double delta = x[0] - x[1];
  const double rd = h.radius_diff;
  const TestFunction B(1, Box(Point{delta - rd}, Point{delta + rd}),
                       [delta, rd](const Point& t) { return cplx(standard_bump((t[0] - delta) / rd), 0.0); }, {}, rd,
                       0.0, 1.0);
  std::vector<IntegralRecord> out;
  for (const auto& kk : k_targets) {
    const double w1 = kk[0] / lambda, w2 = kk[1] / lambda;
    const PairingResult r = pair(w, modulate(B, Point{w1}), opt.pairing);
    const cplx f = bump_ft_1d(h.radius_base, w1 + w2) * std::exp(cplx(0.0, -(w1 + w2) * x[1]));
    out.push_back(IntegralRecord{lambda, kk, r.value * f, r.error_estimate * std::abs(f)});
  }
  return out;
}

cplx member_ft(const TestingFamily& fam, double lambda, const Point& k) {
  const TestFunction f = fam.member(lambda);
  if (f.is_zero()) return 0.0;
  const Point om = k * (1.0 / lambda);
  const double h = std::min(f.resolution(), om.norm() > 0.0 ? 1.5 / om.norm() : 1e300);
  const Box S = f.support();
  const auto b0 = quad::uniform_breaks(S.lo[0], S.hi[0], h);
  if (f.dim() == 1)
    return quad::integrate<cplx>(b0, 8, [&](double z) { return f(Point{z}) * std::exp(cplx(0.0, -om[0] * z)); });
  const auto b1 = quad::uniform_breaks(S.lo[1], S.hi[1], h);
  return quad::integrate<cplx>(b0, 8, [&](double z0) {
    return quad::integrate<cplx>(b1, 8, [&](double z1) {
      return f(Point{z0, z1}) * std::exp(cplx(0.0, -(om[0] * z0 + om[1] * z1)));
    });
  });
}

}  // namespace microspec
