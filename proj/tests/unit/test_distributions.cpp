#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/distribution.hpp"

using namespace microspec;

namespace {

TestFunction gauss_bump(double c, double r) {
  return TestFunction(
      1, Box(Point{c - r}, Point{c + r}),
      [c, r](const Point& z) { return cplx(standard_bump((z[0] - c) / r), 0.0); },
      [c, r](const Point& z) { return cplx(standard_bump_derivative((z[0] - c) / r) / r, 0.0); }, r, 0.0, 1.0);
}

}  // namespace

TEST_CASE("point masses") {
  const TestFunction phi = gauss_bump(0.3, 1.0);
  CHECK(std::abs(pair(delta(0.0), phi).value - phi(0.0)) < 1e-14);
  const cplx d1 = pair(delta_derivative(0.0, 1), phi).value;
  CHECK(std::abs(d1 + phi.derivative(0.0, 1)) < 1e-12);
}

TEST_CASE("Sokhotski-Plemelj: 1/(x - i0) - 1/(x + i0) = 2 pi i delta") {
  const TestFunction phi = gauss_bump(0.4, 1.0);
  const cplx a = pair(boundary_value(0.0, -1), phi).value;
  const cplx b = pair(boundary_value(0.0, +1), phi).value;
  CHECK(std::abs(a - b - cplx(0.0, 2.0 * kPi) * phi(0.0)) < 1e-10);
  const cplx pv = pair(principal_value(0.0), phi).value;
  CHECK(std::abs(0.5 * (a + b) - pv) < 1e-10);
}

TEST_CASE("Heaviside pairing integrates the right half-line") {
  const TestFunction phi = gauss_bump(0.0, 2.0);
  const cplx h = pair(heaviside(0.0), phi).value;
  const cplx all = pair(smooth_function(1, [](const Point&) { return 1.0; }, Box(Point{-3.0}, Point{3.0}), 1.0, "one"), phi).value;
  CHECK(std::abs(h - 0.5 * all) < 1e-10);
}

TEST_CASE("catalog keys") {
  for (const auto& e : list_catalog()) {
    if (e.key.find('<') != std::string::npos || e.key.find('|') != std::string::npos) continue;
    CHECK_NOTHROW(parse_catalog_key(e.key));
  }
  CHECK(parse_catalog_key("delta@0").dim() == 1);
  CHECK(parse_catalog_key("line-delta:n=(1,0)").dim() == 2);
  CHECK(parse_catalog_key("kernel:bv").dim() == 2);
  CHECK(parse_catalog_key("kernel:chiral2d").dim() == 4);
  CHECK(error_code_of([] { parse_catalog_key("nonsense"); }) == ErrorCode::ConfigError);
  CHECK(error_code_of([] { boundary_value(0.0, 2); }) == ErrorCode::BadRange);
  CHECK(error_code_of([] { delta_derivative(0.0, 4); }) == ErrorCode::BadRange);
}

TEST_CASE("ground truth of the boundary value is one-sided") {
  const auto t = catalog_ground_truth(parse_catalog_key("bv:-i0@0"));
  CHECK(t.singular(Point{0.0}, Point{double(kBvMinusSingularSide)}));
  CHECK_FALSE(t.singular(Point{0.0}, Point{-double(kBvMinusSingularSide)}));
  CHECK_FALSE(t.singular(Point{1.0}, Point{double(kBvMinusSingularSide)}));
  CHECK(error_code_of([] { catalog_ground_truth(tensor_product({delta(0.0), delta(0.0)})); }) ==
        ErrorCode::UnknownGroundTruth);
}

TEST_CASE("kernel pairing: iterated quadrature and correlation reduction agree") {
  const std::vector<TestFunction> phis{gauss_bump(0.2, 1.0), gauss_bump(-0.1, 0.8)};
  for (const char* key : {"kernel:smooth", "kernel:bv", "kernel:delta"}) {
    const Distribution k = parse_catalog_key(key);
    const auto a = kernel_pair_n(k, phis);
    const auto b = kernel_pair_by_correlation(k, phis);
    CAPTURE(key);
    CHECK(std::abs(a.value - b.value) <= 1e-7 + 10 * (a.error_estimate + b.error_estimate));
  }
}

TEST_CASE("shifted pairing moves the test function") {
  const TestFunction phi = gauss_bump(0.0, 1.0);
  const cplx v = pair_shifted(delta(0.5), phi, Point{0.25}).value;
  CHECK(std::abs(v - phi(0.25)) < 1e-14);
}

TEST_CASE("step against an even function of total integral 2") {
  const TestFunction phi = gauss_bump(0.0, 1.0);
  const double total = std::real(pair(smooth_function(1, [](const Point&) { return 1.0; }, Box(Point{-2.0}, Point{2.0}), 1.0, "one"), phi).value);
  const cplx v = pair(heaviside(0.0), phi.scaled(2.0 / total)).value;
  CHECK(std::abs(v - 1.0) < 1e-12);
}
