#include <cmath>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "microspec/decay.hpp"
#include "microspec/grid.hpp"

using namespace microspec;

namespace {

std::vector<double> power_law(const std::vector<double>& L, double c, double a) {
  std::vector<double> m;
  for (double l : L) m.push_back(c * std::pow(l, a));
  return m;
}

}  // namespace

TEST_CASE("least-squares slope matches the reference fit") {
  const auto& o = oracle()["decay_fit"];
  const auto f = fit_decay(o["lambdas"].get<std::vector<double>>(), o["magnitudes"].get<std::vector<double>>());
  CHECK(f.slope == doctest::Approx(o["slope"].get<double>()).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(o["intercept"].get<double>()).epsilon(1e-12));
  CHECK(f.classification == Classification::Indeterminate);
}

TEST_CASE("thresholds") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12).values;
  CHECK(fit_decay(L, power_law(L, 1.0, 0.0)).classification == Classification::Singular);
  CHECK(fit_decay(L, power_law(L, 1.0, -1.0)).classification == Classification::Singular);
  CHECK(fit_decay(L, power_law(L, 1.0, 6.0)).classification == Classification::Regular);
  CHECK(fit_decay(L, power_law(L, 1.0, 3.0)).classification == Classification::Indeterminate);
  const auto adj = polynomial_prefactor_adjust(fit_decay(L, power_law(L, 1.0, 2.0)), 1.0);
  CHECK(adj.classification == Classification::Singular);
  CHECK(adj.excess_slope() == doctest::Approx(1.0));
}

TEST_CASE("floor and degenerate input") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12).values;
  const auto z = fit_decay(L, std::vector<double>(L.size(), 0.0));
  CHECK(z.degenerate);
  CHECK(z.classification == Classification::Regular);
  auto m = power_law(L, 1.0, 1.0);
  for (std::size_t j = 6; j < m.size(); ++j) m[j] = 1e-17;
  const auto f = fit_decay(L, m);
  CHECK(f.floor_hit);
  CHECK(f.classification == Classification::Regular);
}

TEST_CASE("invalid input") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12).values;
  CHECK(error_code_of([&] { fit_decay({L.begin(), L.begin() + 5}, std::vector<double>(5, 1.0)); }) ==
        ErrorCode::BadRange);
  auto m = power_law(L, 1.0, 1.0);
  m[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(error_code_of([&] { fit_decay(L, m); }) == ErrorCode::BadRange);
}

TEST_CASE("suffix check turns a flip into Indeterminate") {
  const auto L = make_ladder(0.25, std::sqrt(0.5), 12).values;
  CHECK(with_suffix_check(fit_decay(L, power_law(L, 1.0, 6.0))).classification == Classification::Regular);
  auto m = power_law(L, 1.0, 6.0);
  m[6] *= 1e-6;
  const auto plain = fit_decay(L, m);
  REQUIRE(plain.classification == Classification::Singular);
  const auto checked = with_suffix_check(plain);
  CHECK(checked.suffix_unstable);
  CHECK(checked.classification == Classification::Indeterminate);
}
