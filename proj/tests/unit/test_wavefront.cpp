#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/wavefront.hpp"

using namespace microspec;

namespace {

const std::vector<Point> kLine{Point{-2.5}, Point{0.0}, Point{2.5}};

}  // namespace

TEST_CASE("classical estimate of a point mass") {
  const auto s = default_settings(1);
  const auto e = estimate_wf_classical(delta(0.0), kLine, s);
  CHECK(e.estimator == EstimatorKind::Classical);
  for (const auto& smp : e.samples) {
    CAPTURE(to_string(smp.point.x));
    if (smp.point.x[0] == 0.0) CHECK(smp.classification == Classification::Singular);
    else CHECK(smp.classification == Classification::Regular);
  }
  const auto* p = e.find(Point{0.0}, Point{1.0});
  REQUIRE(p != nullptr);
  CHECK(p->fit.slope == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("one-sided wavefront of the boundary value") {
  const auto s = default_settings(1);
  const auto e = estimate_wf_classical(parse_catalog_key("bv:-i0@0"), {Point{0.0}}, s);
  const auto truth = catalog_ground_truth(parse_catalog_key("bv:-i0@0"));
  const auto g = compare_ground_truth(e, truth);
  CHECK(g.false_regular == 0);
  CHECK(g.regular_as_singular == 0);
  CHECK(g.regular_indeterminate == 0);
  const auto refl = reflection_pairs(e);
  CHECK(refl.mismatches > 0);
}

TEST_CASE("scaling and single-family estimators agree with the classical one on a step") {
  const auto s = default_settings(1);
  const Distribution u = heaviside(0.0);
  const auto a = estimate_wf_classical(u, kLine, s);
  const auto b = estimate_wf_scaling(u, kLine, s);
  const auto c = estimate_wf_singlefamily(u, kLine, s);
  CHECK(b.p_grid.empty());
  CHECK(c.p_grid == s.p_grid);
  const auto r = cross_validate({&a, &b, &c});
  CHECK(r.decided_pairs > 0);
  CHECK(r.disagreements == 0);
  CHECK(check_conicity(b).pass());
}

TEST_CASE("translation covariance and robustness") {
  auto s = default_settings(1);
  const Distribution u = parse_catalog_key("bv:-i0@1");
  const auto cov = check_translation_covariance_wf(u, EstimatorKind::Classical, {Point{1.0}, Point{3.5}}, s);
  CHECK(cov.compared > 0);
  CHECK(cov.pass());
  const auto e = estimate_wf_classical(u, {Point{1.0}, Point{3.5}}, s);
  const auto rob = window_robustness_check(u, e, s, {"cos", "quadratic"});
  CHECK(rob.runs.size() == 2);
  CHECK(rob.pass());
  CHECK(error_code_of([] { named_multiplier("nope"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("probes and lemma bound") {
  const auto s = default_settings(1);
  const auto pr = quadrature_probes(parse_catalog_key("pv@0"), kLine, s, 6, 3);
  REQUIRE(pr.size() == 6);
  for (const auto& p : pr) CHECK(p.pass);
  std::vector<Point> ks(s.dirs.directions.begin(), s.dirs.directions.end());
  CHECK(check_lemma_bound(suite_at(s, Point{0.0}), s.ladder, ks).pass());
}

TEST_CASE("two-dimensional line mass") {
  auto s = default_settings(2);
  const Distribution u = line_delta(Point{1.0, 0.0});
  const auto e = estimate_wf_classical(u, {Point{0.0, 0.0}, Point{2.5, 0.0}}, s);
  const auto g = compare_ground_truth(e, catalog_ground_truth(u));
  CHECK(g.singular_points > 0);
  CHECK(g.false_regular == 0);
  CHECK(g.regular_as_singular == 0);
  // the normal directions are isolated among eight
  REQUIRE(!e.flags.empty());
  CHECK(e.flags.front().find("isolated") != std::string::npos);
}

TEST_CASE("estimator names") {
  CHECK(std::string(to_string(EstimatorKind::Classical)) == "classical");
  CHECK(std::string(to_string(EstimatorKind::ScalingFamilies)) == "scaling");
  CHECK(std::string(to_string(EstimatorKind::SingleFamily)) == "singlefamily");
}
