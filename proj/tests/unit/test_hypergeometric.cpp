#include "uam/core/errors.hpp"
#include "uam/hypergeometric.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

using namespace uam;

TEST_CASE("2F1 closed forms") {
  for (double x : {0.05, 0.3, 0.7, 0.95}) {
    CHECK(hyp2f1(1, 1, 1, x) == doctest::Approx(1.0 / (1.0 - x)).epsilon(1e-13));
    CHECK(hyp2f1(1, 1, 2, x) == doctest::Approx(-std::log1p(-x) / x).epsilon(1e-12));
    // (1 - x)^{-a} = 2F1(a, b; b; x)
    CHECK(hyp2f1(2.5, 3, 3, x) == doctest::Approx(std::pow(1.0 - x, -2.5)).epsilon(1e-12));
    // Terminating series: 2F1(-2, 1; 1; x) = (1 - x)^2
    CHECK(hyp2f1(-2, 1, 1, x) == doctest::Approx((1.0 - x) * (1.0 - x)).epsilon(1e-14));
  }
  CHECK(hyp2f1(2, 2, 1, 0.0) == 1.0);
}

TEST_CASE("Euler transformation") {
  for (int m = 1; m <= 6; ++m)
    for (int j = 1; j <= 9; ++j) {
      const double x = j / 10.0;
      const double d = hyp2f1(m, m, 1, x);
      CHECK(std::abs(d - hyp2f1_euler(m, m, 1, x)) / d < 1e-12);
    }
}

TEST_CASE("2F1 domain errors") {
  CHECK_THROWS_AS(hyp2f1(1, 1, 1, 1.0), Error);
  CHECK_THROWS_AS(hyp2f1(1, 1, -2, 0.5), Error);
}

TEST_CASE("binomials and pochhammer") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(60, 30) == 118264581564861424ULL);
  CHECK(binomial(5, 7) == 0);
  CHECK_THROWS_AS(binomial(200, 100), Error);
  CHECK(pochhammer(3, 4) == 3.0 * 4 * 5 * 6);
  CHECK(pochhammer(0.5, 0) == 1.0);
}

TEST_CASE("composition counts match enumeration") {
  // Brute-force count of (l_1..l_M) with l_i >= 0 summing to L.
  std::function<std::uint64_t(unsigned, unsigned)> count = [&](unsigned left, unsigned parts) -> std::uint64_t {
    if (parts == 1) return 1;
    std::uint64_t c = 0;
    for (unsigned first = 0; first <= left; ++first) c += count(left - first, parts - 1);
    return c;
  };
  for (unsigned m = 1; m <= 5; ++m)
    for (unsigned l = 0; l <= 12; ++l) CHECK(count_compositions(l, m) == count(l, m));
}

TEST_CASE("partition sum: three routes agree") {
  for (unsigned m = 1; m <= 4; ++m) {
    const PartitionSumReport r = partition_sum_identity(m, 0.3, 80);
    CHECK(r.passed);
    CHECK(r.brute_force == doctest::Approx(r.binomial_series).epsilon(1e-12));
    CHECK(std::abs(r.binomial_series - r.hypergeometric) <= r.tail_bound + 1e-10 * r.hypergeometric);
  }
  // M = 1: geometric series.
  CHECK(partition_sum_identity(1, 0.5, 100).hypergeometric == doctest::Approx(2.0));
}
