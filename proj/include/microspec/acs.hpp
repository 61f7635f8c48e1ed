#pragma once

#include <functional>
#include <string>
#include <vector>

#include "microspec/wavefront.hpp"

namespace microspec {

struct MultiPhasePoint {
  std::vector<Point> xs;
  std::vector<Point> ks;
};

std::string to_string(const MultiPhasePoint& p);

struct AcsSample {
  MultiPhasePoint point;
  int direction = -1;
  double mu = 1.0;
  DecayFit fit;
  std::vector<std::string> family_labels;
  std::vector<DecayFit> family_fits;
  Classification classification = Classification::Indeterminate;
};

struct AcsEstimate {
  int n = 2;
  int d = 1;
  std::string functional_id;
  bool hermitean = false;
  std::vector<AcsSample> samples;

  const AcsSample* find(const std::vector<Point>& xs, const std::vector<Point>& ks, double tol = 1e-12) const;
};

/// Directions over R^{dn}: product set of the per-point sets (n = 2) or the plain set (n = 1).
DirectionSet acs_direction_set(int n, int d, double cap_radius = 0.1, int cap_samples = 5);
EstimatorSettings default_acs_settings(int n, int d);

/// Adds the reversed tuple of every x-tuple (hermitean mirrors) when missing.
std::vector<std::vector<Point>> with_mirrors(const std::vector<std::vector<Point>>& x_tuples);

AcsEstimate estimate_acs(const Distribution& kernel, const std::vector<std::vector<Point>>& x_tuples,
                         const EstimatorSettings& s);

/// phi_s(f_1 (x) ... (x) f_n) = phi(tau_s f_1 (x) ... (x) tau_s f_n).
Distribution shifted_functional(const Distribution& kernel, const Point& s);

// ---- cones

struct ConeSpec {
  int d = 1;
  int n = 2;
};

/// Euclidean distance of k from the closed forward lightcone (k^0 >= |k_spatial|).
double forward_cone_distance(const Point& k);
bool cone_membership(const std::vector<Point>& ks, const ConeSpec& cone, double tol);
/// Pairwise spacelike: |dx^0| < |dx_spatial| for every pair.
bool properly_acausal(const std::vector<Point>& xs);

struct ConeReport {
  int singular = 0;
  std::vector<MultiPhasePoint> violations;
  bool pass() const { return violations.empty(); }
};
ConeReport check_cone_bound(const AcsEstimate& est, const ConeSpec& cone, double tol);

using ConePredicate = std::function<bool(const std::vector<Point>& ks)>;

struct SalientReport {
  bool salient = true;
  bool acausal = false;
  bool singular_in_w = true;
  bool predicts_empty = false;
  std::vector<MultiPhasePoint> findings;  // Singular samples at the tuple when the slice should be empty
  bool pass() const { return findings.empty(); }
};
/// Throws NotSalient when a sampled k and -k both lie in W.
SalientReport salient_cone_filter(const AcsEstimate& est, const std::vector<Point>& x_tuple, const ConePredicate& W,
                                  bool locality);

struct SymmetryReport {
  bool applicable = true;
  int compared = 0;
  std::vector<MultiPhasePoint> asymmetric;
  bool pass() const { return asymmetric.empty(); }
};
/// Mirror of (x_1..x_n; k_1..k_n) is (x_n..x_1; -k_n..-k_1). Throws MissingMirrorSample.
SymmetryReport check_hermitean_symmetry(const AcsEstimate& est);

CheckCount check_translation_covariance(const Distribution& kernel, const std::vector<std::vector<Point>>& x_tuples,
                                        const Point& shift, const EstimatorSettings& s);

struct InclusionReport {
  int wf_singular = 0;
  int matched = 0;
  std::vector<PhasePoint> violations;
  bool pass() const { return violations.empty(); }
};
InclusionReport check_wf_acs_inclusion(const WavefrontEstimate& wf, const AcsEstimate& acs);

struct DiagonalReport {
  Classification status = Classification::Regular;  // Singular if any direction is Singular at (x, x)
  int directions = 0;
  int singular = 0;
  int indeterminate = 0;
};
DiagonalReport check_diagonal_singularity(const WavefrontEstimate& kernel_wf, const Point& x);

/// Sum singular only where a summand is (points where a summand is Indeterminate are skipped).
CheckCount check_subadditivity(const WavefrontEstimate& a, const WavefrontEstimate& b, const WavefrontEstimate& sum);

/// Classification of the acs estimate as a WavefrontEstimate on R^{dn} (concatenated coordinates).
WavefrontEstimate as_wavefront(const AcsEstimate& acs);

}  // namespace microspec
