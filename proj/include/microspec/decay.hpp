#pragma once

#include <string>
#include <vector>

#include "microspec/core.hpp"

namespace microspec {

struct IntegralRecord;

enum class Classification { Regular, Singular, Indeterminate };

const char* to_string(Classification c);

struct DecayThresholds {
  double n_rapid = 5.0;
  double n_sing = 1.5;
  double floor_rel = 1e-11;
};

struct DecayFit {
  std::vector<double> lambdas;
  std::vector<double> magnitudes;  // max over the cap
  std::vector<double> errors;      // max quadrature error over the cap
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double floor = 0.0;
  bool floor_hit = false;
  bool degenerate = false;
  bool suffix_unstable = false;
  double trivial_order = 0.0;
  DecayThresholds thresholds;
  Classification classification = Classification::Indeterminate;

  double excess_slope() const { return slope - trivial_order; }
};

/// Least-squares slope of log|I| against log lambda over the finest half of the ladder.
DecayFit fit_decay(const std::vector<double>& lambdas, const std::vector<double>& magnitudes,
                   const DecayThresholds& th = {}, std::vector<double> errors = {});
/// Records grouped per ladder entry (one vector of cap samples per lambda).
DecayFit fit_decay(const std::vector<std::vector<IntegralRecord>>& by_lambda, const DecayThresholds& th = {});

/// Shift both thresholds by the trivial order and reclassify; the slope is unchanged.
DecayFit polynomial_prefactor_adjust(const DecayFit& fit, double trivial_order);

/// Classification from slope, floor and thresholds (trivial order included).
Classification classify(const DecayFit& fit);

/// Refit without the `drop` coarsest entries; a Regular <-> Singular flip makes the fit Indeterminate.
DecayFit with_suffix_check(const DecayFit& fit, int drop = 2);

}  // namespace microspec
