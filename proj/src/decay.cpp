#include "microspec/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "microspec/oscillatory.hpp"

namespace microspec {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Regular: return "Regular";
    case Classification::Singular: return "Singular";
    default: return "Indeterminate";
  }
}

Classification classify(const DecayFit& fit) {
  if (fit.degenerate || fit.floor_hit) return Classification::Regular;
  const double ex = fit.excess_slope();
  if (ex >= fit.thresholds.n_rapid) return Classification::Regular;
  if (ex <= fit.thresholds.n_sing) return Classification::Singular;
  return Classification::Indeterminate;
}

DecayFit fit_decay(const std::vector<double>& lambdas, const std::vector<double>& magnitudes,
                   const DecayThresholds& th, std::vector<double> errors) {
  const std::size_t n = lambdas.size();
  if (n < 6) throw Error(ErrorCode::BadRange, "decay fit needs at least 6 ladder points");
  if (magnitudes.size() != n) throw Error(ErrorCode::InvalidArgument, "ladder and magnitude lengths differ");
  for (double v : magnitudes)
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::BadRange, "magnitudes must be finite and non-negative");
  DecayFit f;
  f.lambdas = lambdas;
  f.magnitudes = magnitudes;
  f.errors = errors.empty() ? std::vector<double>(n, 0.0) : std::move(errors);
  f.thresholds = th;

  if (std::all_of(magnitudes.begin(), magnitudes.end(), [](double v) { return v == 0.0; })) {
    f.degenerate = true;
    f.slope = std::numeric_limits<double>::infinity();
    f.r2 = 1.0;
    f.classification = Classification::Regular;
    return f;
  }

  const std::size_t half = n / 2;
  double coarse = 0.0;
  for (std::size_t j = 0; j < half; ++j) coarse = std::max(coarse, magnitudes[j]);
  f.floor = std::max(th.floor_rel * coarse, 1e-300);
  f.floor_hit = true;
  for (std::size_t j = half; j < n; ++j)
    if (!(magnitudes[j] < f.floor)) f.floor_hit = false;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = static_cast<double>(n - half);
  for (std::size_t j = half; j < n; ++j) {
    const double x = std::log(lambdas[j]);
    const double y = std::log(std::max(magnitudes[j], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m, vy = syy - sy * sy / m, cxy = sxy - sx * sy / m;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / m;
  f.r2 = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  f.classification = classify(f);
  return f;
}

DecayFit fit_decay(const std::vector<std::vector<IntegralRecord>>& by_lambda, const DecayThresholds& th) {
  std::vector<double> lam, mag, err;
  for (const auto& recs : by_lambda) {
    if (recs.empty()) throw Error(ErrorCode::InvalidArgument, "empty cap");
    double m = 0.0, e = 0.0;
    for (const auto& r : recs) {
      m = std::max(m, std::abs(r.value));
      e = std::max(e, r.quadrature_error);
    }
    lam.push_back(recs.front().lambda);
    mag.push_back(m);
    err.push_back(e);
  }
  return fit_decay(lam, mag, th, err);
}

DecayFit polynomial_prefactor_adjust(const DecayFit& fit, double trivial_order) {
  if (!std::isfinite(trivial_order)) throw Error(ErrorCode::BadRange, "trivial order must be finite");
  DecayFit f = fit;
  f.trivial_order = trivial_order;
  f.classification = classify(f);
  return f;
}

DecayFit with_suffix_check(const DecayFit& fit, int drop) {
  DecayFit f = fit;
  if (static_cast<int>(fit.lambdas.size()) - drop < 6 || fit.degenerate) return f;
  const std::vector<double> lam(fit.lambdas.begin() + drop, fit.lambdas.end());
  const std::vector<double> mag(fit.magnitudes.begin() + drop, fit.magnitudes.end());
  const DecayFit g = polynomial_prefactor_adjust(fit_decay(lam, mag, fit.thresholds), fit.trivial_order);
  const auto a = fit.classification, b = g.classification;
  if ((a == Classification::Regular && b == Classification::Singular) ||
      (a == Classification::Singular && b == Classification::Regular)) {
    f.suffix_unstable = true;
    f.classification = Classification::Indeterminate;
  }
  return f;
}

}  // namespace microspec
