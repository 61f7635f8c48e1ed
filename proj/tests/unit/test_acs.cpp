#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/acs.hpp"

using namespace microspec;

namespace {

AcsSample sample(std::vector<Point> xs, std::vector<Point> ks, Classification c) {
  AcsSample s;
  s.point = {std::move(xs), std::move(ks)};
  s.classification = c;
  return s;
}

}  // namespace

TEST_CASE("forward cone distance") {
  CHECK(forward_cone_distance(Point{2.0}) == 0.0);
  CHECK(forward_cone_distance(Point{-2.0}) == doctest::Approx(2.0));
  CHECK(forward_cone_distance(Point{1.0, 0.5}) == 0.0);
  CHECK(forward_cone_distance(Point{0.0, 1.0}) == doctest::Approx(std::sqrt(0.5)));
  CHECK(forward_cone_distance(Point{-1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("cone membership of two-point covectors") {
  const ConeSpec c{1, 2};
  CHECK(cone_membership({Point{-1.0}, Point{1.0}}, c, 1e-9));
  CHECK_FALSE(cone_membership({Point{1.0}, Point{-1.0}}, c, 1e-9));
  CHECK_FALSE(cone_membership({Point{1.0}, Point{1.0}}, c, 1e-9));
  const ConeSpec c2{2, 2};
  CHECK(cone_membership({Point{-1.0, 0.5}, Point{1.0, -0.5}}, c2, 1e-9));
  CHECK_FALSE(cone_membership({Point{0.0, 1.0}, Point{0.0, -1.0}}, c2, 1e-9));
  CHECK(error_code_of([&] { cone_membership({Point{1.0}}, c, 0.1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("acausal tuples") {
  CHECK(properly_acausal({Point{0.0, 0.0}, Point{0.0, 5.0}}));
  CHECK_FALSE(properly_acausal({Point{0.0, 0.0}, Point{5.0, 1.0}}));
  CHECK_FALSE(properly_acausal({Point{0.0, 0.0}, Point{1.0, 1.0}}));
  CHECK(error_code_of([] { properly_acausal({Point{0.0, 0.0}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("direction sets over R^{dn}") {
  CHECK(acs_direction_set(2, 1).directions.size() == 8);
  CHECK(acs_direction_set(2, 2).directions.size() == 80);
  CHECK(acs_direction_set(2, 2).dim == 4);
  CHECK(with_mirrors({{Point{0.0}, Point{1.0}}}).size() == 2);
  CHECK(with_mirrors({{Point{0.0}, Point{0.0}}}).size() == 1);
}

TEST_CASE("hermitean symmetry needs mirror samples") {
  AcsEstimate e;
  e.hermitean = true;
  e.samples.push_back(sample({Point{0.0}, Point{1.0}}, {Point{-1.0}, Point{1.0}}, Classification::Singular));
  CHECK(error_code_of([&] { check_hermitean_symmetry(e); }) == ErrorCode::MissingMirrorSample);
  e.samples.push_back(sample({Point{1.0}, Point{0.0}}, {Point{-1.0}, Point{1.0}}, Classification::Regular));
  const auto r = check_hermitean_symmetry(e);
  CHECK(r.compared == 2);
  CHECK(r.asymmetric.size() == 2);
  e.hermitean = false;
  CHECK_FALSE(check_hermitean_symmetry(e).applicable);
}

TEST_CASE("cone bound counts planted violations") {
  AcsEstimate e;
  e.samples.push_back(sample({Point{0.0}, Point{0.0}}, {Point{-1.0}, Point{1.0}}, Classification::Singular));
  e.samples.push_back(sample({Point{0.0}, Point{0.0}}, {Point{1.0}, Point{-1.0}}, Classification::Regular));
  CHECK(check_cone_bound(e, {1, 2}, 0.1).pass());
  e.samples.push_back(sample({Point{0.0}, Point{0.0}}, {Point{1.0}, Point{-1.0}}, Classification::Singular));
  const auto r = check_cone_bound(e, {1, 2}, 0.1);
  CHECK(r.singular == 2);
  CHECK(r.violations.size() == 1);
}

TEST_CASE("salient filter rejects non-salient cones") {
  AcsEstimate e;
  const std::vector<Point> xs{Point{0.0, 0.0}, Point{0.0, 5.0}};
  e.d = 2;
  e.samples.push_back(
      sample(xs, {Point{1.0, 0.0}, Point{-1.0, 0.0}}, Classification::Singular));
  const ConePredicate everything = [](const std::vector<Point>&) { return true; };
  CHECK(error_code_of([&] { salient_cone_filter(e, xs, everything, true); }) == ErrorCode::NotSalient);
  const ConePredicate forward = [](const std::vector<Point>& ks) { return cone_membership(ks, {2, 2}, 1e-9); };
  const auto r = salient_cone_filter(e, xs, forward, true);
  CHECK(r.acausal);
  CHECK(r.pass());
}

TEST_CASE("smooth kernel has empty analytic cone slice") {
  const Distribution u = parse_catalog_key("kernel:smooth");
  const auto s = default_acs_settings(2, 1);
  const auto e = estimate_acs(u, {{Point{0.0}, Point{0.0}}}, s);
  CHECK(e.samples.size() == 8 * 3);
  for (const auto& smp : e.samples) CHECK(smp.classification == Classification::Regular);
}

TEST_CASE("subadditivity and diagonal on hand-built estimates") {
  auto make = [](Classification c0) {
    WavefrontEstimate w;
    WfSample a;
    a.point = {Point{0.0, 0.0}, Point{-std::sqrt(0.5), std::sqrt(0.5)}};
    a.classification = c0;
    WfSample b = a;
    b.point.xi = Point{1.0, 0.0};
    b.classification = Classification::Regular;
    w.samples = {a, b};
    return w;
  };
  const auto sing = make(Classification::Singular), reg = make(Classification::Regular);
  CHECK(check_subadditivity(sing, reg, sing).pass());
  CHECK_FALSE(check_subadditivity(reg, reg, sing).pass());
  const auto d = check_diagonal_singularity(sing, Point{0.0});
  CHECK(d.status == Classification::Singular);
  CHECK(d.directions == 2);
  CHECK(check_diagonal_singularity(reg, Point{0.0}).status == Classification::Regular);
}

TEST_CASE("translated kernel is the same functional") {
  const Distribution u = parse_catalog_key("kernel:bv");
  CHECK(shifted_functional(u, Point{3.0}).key() == u.key());
}
