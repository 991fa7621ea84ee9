#include "uam/core/errors.hpp"
#include "uam/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace uam;

TEST_CASE("mean estimate and standard error") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const MCEstimate<double> e = mean_estimate(x);
  CHECK(e.value == 3.0);
  CHECK(e.std_error == doctest::Approx(std::sqrt(2.5 / 5.0)));
  CHECK_THROWS_AS(mean_estimate(std::vector<double>{1.0}), Error);
}

TEST_CASE("verdicts: equality, one-sided bound, exact") {
  const MCEstimate<double> e{1.0, 0.1, 100, {}};
  CHECK(make_equality("a", 1.25, e).passed);
  CHECK_FALSE(make_equality("a", 1.35, e).passed);
  CHECK(make_upper_bound("b", 0.8, e).passed);
  CHECK_FALSE(make_upper_bound("b", 0.6, e).passed);
  CHECK_FALSE(make_upper_bound("b", 3.0, MCEstimate<double>{-4.0, 0.1, 100, {}}).passed);  // modulus is bounded
  CHECK(make_exact("c", 1.0, 1.0 + 1e-13, 1e-12).passed);
  CHECK_FALSE(make_exact("c", 1.0, 1.0 + 1e-11, 1e-12).passed);
}

TEST_CASE("quantile uses linear interpolation between order statistics") {
  CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
  CHECK(quantile({4, 1, 3, 2}, 1.0) == 4.0);
  CHECK_THROWS_AS(quantile({1.0}, 1.5), Error);
}

TEST_CASE("KS statistics") {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  CHECK(ks_one_sample(grid, [](double x) { return x; }) == doctest::Approx(0.005));
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2}, {3, 4}) == 1.0);
}

TEST_CASE("Wilson interval") {
  const Interval i = wilson_interval(50, 100);
  CHECK(i.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(i.high == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 0).high == 1.0);
}
