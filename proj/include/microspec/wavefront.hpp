#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "microspec/decay.hpp"
#include "microspec/distribution.hpp"
#include "microspec/grid.hpp"
#include "microspec/oscillatory.hpp"

namespace microspec {

struct PhasePoint {
  Point x;
  Point xi;
};

enum class EstimatorKind { Classical, ScalingFamilies, SingleFamily };
const char* to_string(EstimatorKind k);

using FamilySuiteFn = std::function<std::vector<TestingFamily>(const Point& x)>;
using Multiplier = std::function<double(const Point&)>;

struct EstimatorSettings {
  LambdaLadder ladder = default_ladder();
  DirectionSet dirs;
  double window_radius = 2.0;
  DecayThresholds thresholds;
  std::vector<double> mu_multipliers{0.5, 2.0};
  /// Evaluate the mu-samples from scratch (reparametrized families on the scaled ladder) instead of reusing.
  bool recompute_conic = false;
  std::uint64_t seed = 7;
  int threads = 1;
  OscillatoryOptions osc;
  /// Single-family estimator.
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0};
  /// Scaling estimator; empty: default_family_suite.
  FamilySuiteFn suite;
  /// Window multiplier in window-local coordinates (robustness runs).
  std::optional<Multiplier> multiplier;
  std::string multiplier_label;
  int suffix_drop = 2;
  std::string digest;
};

/// Settings with the direction set for dimension `dim` (2 directions in 1D, 8 in 2D).
EstimatorSettings default_settings(int dim);

struct WfSample {
  PhasePoint point;
  int direction = -1;
  double mu = 1.0;
  DecayFit fit;  // the deciding fit
  std::vector<std::string> family_labels;
  std::vector<DecayFit> family_fits;
  Classification classification = Classification::Indeterminate;
};

struct WavefrontEstimate {
  EstimatorKind estimator = EstimatorKind::Classical;
  std::vector<double> p_grid;
  std::vector<WfSample> samples;
  std::string config_digest;
  std::vector<std::string> flags;

  const WfSample* find(const Point& x, const Point& xi, double tol = 1e-12) const;
};

/// x-lattice: `per_axis` points spaced `spacing`, centred on the first point feature (1-D) or the origin.
std::vector<Point> default_x_lattice(const Distribution& u, int per_axis = 9, double spacing = 2.5);

WavefrontEstimate estimate_wf_classical(const Distribution& u, const std::vector<Point>& xs,
                                        const EstimatorSettings& s);
WavefrontEstimate estimate_wf_scaling(const Distribution& u, const std::vector<Point>& xs,
                                      const EstimatorSettings& s);
WavefrontEstimate estimate_wf_singlefamily(const Distribution& u, const std::vector<Point>& xs,
                                           const EstimatorSettings& s);
WavefrontEstimate run_estimator(EstimatorKind kind, const Distribution& u, const std::vector<Point>& xs,
                                const EstimatorSettings& s);

/// Combine per-family fits: Singular if any, Regular if all, else Indeterminate.
WfSample combine_family_fits(const PhasePoint& pt, std::vector<std::string> labels, std::vector<DecayFit> fits);

// ---- checks

struct FlipReport {
  std::string multiplier;
  int compared = 0;
  int failures = 0;  // Regular -> Singular
  int warnings = 0;  // Regular -> Indeterminate
  std::vector<PhasePoint> failed_points;
};

struct RobustnessReport {
  std::vector<FlipReport> runs;
  bool pass() const;
};

/// Named multipliers: "cos" (prod 1 + 0.5 cos y_i) and "quadratic" (1 + 0.3 y_1 - 0.5 |y|^2); "one" is identity.
Multiplier named_multiplier(const std::string& name);
std::vector<std::string> default_multiplier_names();

RobustnessReport window_robustness_check(const Distribution& u, const WavefrontEstimate& estimate,
                                         const EstimatorSettings& s,
                                         const std::vector<std::string>& multipliers = default_multiplier_names());

struct AgreementReport {
  std::vector<std::string> names;
  std::vector<std::vector<double>> agreement;  // pairwise over jointly decided points
  int decided_pairs = 0;
  int disagreements = 0;
  int disagreements_not_adjacent = 0;  // neither neighbouring direction is Indeterminate anywhere
  double disagreement_rate() const { return decided_pairs ? double(disagreements) / decided_pairs : 0.0; }
};

AgreementReport cross_validate(const std::vector<const WavefrontEstimate*>& estimates);

struct GroundTruthReport {
  int singular_points = 0;
  int false_regular = 0;
  int regular_points = 0;
  int regular_indeterminate = 0;
  int regular_as_singular = 0;
  double indeterminate_rate() const { return regular_points ? double(regular_indeterminate) / regular_points : 0.0; }
};

GroundTruthReport compare_ground_truth(const WavefrontEstimate& est, const WfDescriptor& truth);

struct CheckCount {
  int compared = 0;
  int mismatches = 0;
  std::vector<std::string> details;
  bool pass() const { return mismatches == 0; }
};

/// Every (x, xi) sample has its (x, mu xi) partners with identical classification.
CheckCount check_conicity(const WavefrontEstimate& est, const std::vector<double>& mus = {0.5, 2.0});
/// Estimate at x versus the estimate of u o tau_{-x} at 0.
CheckCount check_translation_covariance_wf(const Distribution& u, EstimatorKind kind, const std::vector<Point>& xs,
                                           const EstimatorSettings& s);
/// classification(x, xi) versus classification(x, -xi); mismatches are listed (expected for boundary values).
CheckCount reflection_pairs(const WavefrontEstimate& est);
/// Lemma bound |f^_lambda(k / lambda)| <= sup|g| vol(O) lambda^m on every ladder point of every scaled family.
CheckCount check_lemma_bound(const std::vector<TestingFamily>& fams, const LambdaLadder& ladder,
                             const std::vector<Point>& ks);

struct ProbeResult {
  double lambda = 0.0;
  Point x, k;
  std::string family;
  cplx fast, direct;
  double err_fast = 0.0, err_direct = 0.0;
  bool pass = false;
};
/// Random fast-vs-direct comparisons: |fast - direct| <= 10 (err_fast + err_direct).
std::vector<ProbeResult> quadrature_probes(const Distribution& u, const std::vector<Point>& xs,
                                           const EstimatorSettings& s, int count = 16, std::uint64_t seed = 1);

/// Family suite used by the scaling estimator at x.
std::vector<TestingFamily> suite_at(const EstimatorSettings& s, const Point& x);

}  // namespace microspec
