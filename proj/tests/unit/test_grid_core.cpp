#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/oscillatory.hpp"

using namespace microspec;

TEST_CASE("points concatenate and split") {
  const Point p = concat({Point{1.0}, Point{2.0}, Point{3.0}});
  CHECK(p.dim == 3);
  CHECK(p[2] == 3.0);
  const auto parts = split(concat({Point{1.0, 2.0}, Point{3.0, 4.0}}), 2);
  CHECK(parts[1] == Point{3.0, 4.0});
  CHECK(error_code_of([] { split(Point{1.0, 2.0, 3.0}, 2); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("boxes") {
  const Box b = Box::cube(Point{0.0, 0.0}, 1.0);
  CHECK(b.contains(Point{0.5, -1.0}));
  CHECK_FALSE(b.contains(Point{1.5, 0.0}));
  CHECK(b.volume() == doctest::Approx(4.0));
  CHECK(b.scaled(0.5).contains(b.scaled(0.25)));
  CHECK(error_code_of([] { Box(Point{1.0}, Point{0.0}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("lambda ladder") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  REQUIRE(L.values.size() == 12);
  CHECK(L.values.front() == doctest::Approx(0.25));
  for (std::size_t j = 1; j < L.values.size(); ++j) CHECK(L.values[j] / L.values[j - 1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(error_code_of([] { make_ladder(0.25, 1.5, 12); }) == ErrorCode::BadRange);
  CHECK(error_code_of([] { make_ladder(1.5, 0.5, 12); }) == ErrorCode::BadRange);
  CHECK(error_code_of([] { make_ladder(0.25, 0.5, 5); }) == ErrorCode::BadRange);
}

TEST_CASE("direction sets and caps") {
  const auto D1 = make_direction_set(1, 2);
  REQUIRE(D1.directions.size() == 2);
  CHECK(D1.directions[0][0] * D1.directions[1][0] == doctest::Approx(-1.0));
  const auto D2 = make_direction_set(2, 8, 0.1, 5);
  REQUIRE(D2.directions.size() == 8);
  for (const auto& d : D2.directions) CHECK(d.norm() == doctest::Approx(1.0));
  const auto cap = D2.cap(3);
  REQUIRE(cap.size() == 5);
  CHECK(cap.front() == D2.directions[3]);
  for (const auto& k : cap) CHECK((k - D2.directions[3]).norm() <= 0.1 + 1e-12);
  CHECK(error_code_of([] { make_direction_set(1, 3); }) == ErrorCode::BadRange);
  CHECK(error_code_of([] { make_direction_set(2, 8, 0.1, 2); }) == ErrorCode::BadRange);
}

TEST_CASE("bump windows") {
  const Window h = make_bump(Point{0.0}, 2.0);
  CHECK(h(Point{0.0}) == doctest::Approx(1.0));
  CHECK(h(Point{2.0}) == 0.0);
  CHECK(h(Point{1.0}) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));
  const Grid coarse(Point{-4.0}, Point{1.5}, {9});
  CHECK(error_code_of([&] { make_bump(Point{0.0}, 2.0, coarse); }) == ErrorCode::RadiusTooSmall);
  CHECK(error_code_of([] { make_bump(Point{0.0}, -1.0); }) == ErrorCode::BadRange);
}

TEST_CASE("bump transforms match the reference values") {
  for (const auto& e : oracle()["bump_ft"]) {
    const Window b = make_bump(Point{e["center"].get<double>()}, e["radius"].get<double>());
    const cplx v = window_ft(b, Point{e["omega"].get<double>()});
    const cplx ref = cvalue(e["value"]);
    CHECK(std::abs(v - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("testing families respect the support law") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  for (const Point& x : {Point{0.0}, Point{1.5, -2.0}}) {
    for (const auto& fam : default_family_suite(x, L.values, 7)) {
      for (double lam : L.values) {
        if (fam.is_zero(lam)) continue;
        CHECK(fam.law_box(lam).contains(fam.member_support(lam)));
        CHECK(std::abs(fam.member(lam)(x)) <= fam.sup_bound() + 1e-12);
      }
    }
  }
}

TEST_CASE("modulated family is deterministic in the seed") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12);
  const auto a = default_family_suite(Point{0.0}, L.values, 11).back();
  const auto b = default_family_suite(Point{0.0}, L.values, 11).back();
  const auto c = default_family_suite(Point{0.0}, L.values, 12).back();
  CHECK(a.modulation(L.values[4]).nu == b.modulation(L.values[4]).nu);
  CHECK(a.modulation(L.values[4]).nu != c.modulation(L.values[4]).nu);
}

TEST_CASE("parallel_for fills every slot and rethrows the lowest failure") {
  std::vector<int> out(100, 0);
  parallel_for(out.size(), 3, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 17 || i == 40) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
  CHECK(resolve_threads(3) == 3);
}
