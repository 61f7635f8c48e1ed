#include <cmath>
#include <memory>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/oscillatory.hpp"

using namespace microspec;

TEST_CASE("classical local transforms match the reference values") {
  for (const auto& e : oracle()["classical"]) {
    const Distribution u = parse_catalog_key(e["key"].get<std::string>());
    const Window chi = make_bump(Point{e["x"].get<double>()}, 2.0);
    const double lam = e["lambda"].get<double>();
    const auto r = classical_local_ft(u, chi, lam, {Point{e["k"].get<double>()}});
    const cplx ref = cvalue(e["value"]);
    CAPTURE(e.dump());
    CHECK(std::abs(r[0].value - ref) <= 1e-9 * std::max(1.0, std::abs(ref)) + 10 * r[0].quadrature_error);
    CHECK(std::abs(r[0].value - ref) <= 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("windowed scaled transform of a point mass") {
  const auto g = std::make_shared<BumpProfile>(Point{0.0}, 1.0);
  const auto fam = TestingFamily::scaled(g, Point{0.0}, 1.0, default_support_region(1));
  const Window h = make_bump(Point{0.0}, 2.0);
  const Distribution u = delta(0.0);
  for (const auto& e : oracle()["delta_scaled"]) {
    const double lam = e["lambda"].get<double>();
    const Point k{e["k"].get<double>()};
    const cplx ref = cvalue(e["value"]);
    const auto fast = windowed_scaled_ft(u, h, fam, lam, {k});
    const auto direct = windowed_scaled_ft_direct(u, h, fam, lam, {k});
    CAPTURE(e.dump());
    CHECK(std::abs(fast[0].value - ref) <= 1e-8 * std::abs(ref) + 10 * fast[0].quadrature_error);
    CHECK(std::abs(direct[0].value - ref) <= 1e-8 * std::abs(ref) + 10 * direct[0].quadrature_error);
  }
}

TEST_CASE("fast and direct transforms agree within their error estimates") {
  const Window h = make_bump(Point{0.0}, 2.0);
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  const auto fams = default_family_suite(Point{0.0}, L.values, 7);
  const std::vector<Point> ks{Point{1.0}, Point{-1.0}, Point{1.08}};
  for (const char* key : {"bv:-i0@0", "heaviside@0", "pv@0", "delta'@0"}) {
    const Distribution u = parse_catalog_key(key);
    for (double lam : {L.values[3], L.values[10]}) {
      const auto a = windowed_scaled_ft(u, h, fams[0], lam, ks);
      const auto b = windowed_scaled_ft_direct(u, h, fams[0], lam, ks);
      for (std::size_t i = 0; i < ks.size(); ++i) {
        CAPTURE(key);
        CAPTURE(lam);
        CHECK(std::abs(a[i].value - b[i].value) <= 10 * (a[i].quadrature_error + b[i].quadrature_error));
      }
    }
  }
}

TEST_CASE("two-point kernel with the adapted cutoff matches brute-force quadrature") {
  const PairWindow pw{1, 2.0, 2.0, Point{1.0}, 2.0};
  for (const auto& e : oracle()["kernel_classical"]) {
    const Distribution u = parse_catalog_key(e["key"].get<std::string>());
    const Point x{e["x"][0].get<double>(), e["x"][1].get<double>()};
    const Point k{e["k"][0].get<double>(), e["k"][1].get<double>()};
    const auto r = classical_local_ft_kernel(u, pw, x, e["lambda"].get<double>(), {k});
    const cplx ref = cvalue(e["value"]);
    CAPTURE(e.dump());
    CHECK(std::abs(r[0].value - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("member transforms obey the volume bound") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  for (const auto& fam : default_family_suite(Point{0.0}, L.values, 7)) {
    if (fam.kind() != TestingFamily::Kind::ScaledProfile) continue;
    for (double lam : L.values) {
      const double bound = fam.sup_bound() * fam.support_region().volume() * lam;
      CHECK(std::abs(member_ft(fam, lam, Point{1.0})) <= bound * (1 + 1e-9));
    }
  }
}

TEST_CASE("plans refuse grids past the cap") {
  const Window h = make_bump(Point{0.0, 0.0}, 2.0);
  CHECK(error_code_of([&] { make_plan(h, 1e-5, {Point{1.0, 1.0}}); }) == ErrorCode::NyquistUnsatisfiable);
  const auto p = make_plan(make_bump(Point{0.0}, 2.0), 0.25, {Point{1.0}});
  CHECK(p.y_grid.max_spacing() <= kPi * 0.25 / 4.0 + 1e-15);
}

TEST_CASE("oblique features are rejected by the moment transform") {
  const Distribution u = line_delta(Point{std::sqrt(0.5), std::sqrt(0.5)});
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  const auto fams = default_family_suite(Point{0.0, 0.0}, L.values, 7);
  const Window h = make_bump(Point{0.0, 0.0}, 2.0);
  CHECK(error_code_of([&] { windowed_scaled_ft(u, h, fams[0], 0.25, {Point{1.0, 0.0}}); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("step seen away from its jump") {
  const Window chi = make_bump(Point{3.0}, 1.0);
  for (const auto& e : oracle()["heaviside_far"]) {
    const auto r = classical_local_ft(heaviside(0.0), chi, e["lambda"].get<double>(), {Point{e["k"].get<double>()}});
    const cplx ref = cvalue(e["value"]);
    CHECK(std::abs(r[0].value - ref) <= 1e-6 * std::abs(ref) + 1e-15);
  }
}

TEST_CASE("smooth profile: windowed scaled transform decays below 1e-10") {
  const auto g = std::make_shared<BumpProfile>(Point{0.0}, 1.0);
  const auto fam = TestingFamily::scaled(g, Point{0.0}, 1.0, default_support_region(1));
  const Window h = make_bump(Point{0.0}, 2.0);
  const Distribution u = parse_catalog_key("smooth:gauss");
  for (const auto& e : oracle()["smooth_scaled"]) {
    const double lam = e["lambda"].get<double>();
    const auto r = windowed_scaled_ft(u, h, fam, lam, {Point{e["k"].get<double>()}});
    const cplx ref = cvalue(e["value"]);
    CAPTURE(lam);
    CHECK(std::abs(r[0].value - ref) <= 1e-6 * std::abs(ref) + 10 * r[0].quadrature_error + 1e-16);
    if (lam <= 0.0078125) CHECK(std::abs(r[0].value) < 1e-10);
  }
}
