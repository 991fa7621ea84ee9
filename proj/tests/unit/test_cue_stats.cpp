#include "uam/core/errors.hpp"
#include "uam/cue_stats.hpp"
#include "uam/rouche.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

using namespace uam;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex w2_kernel(Complex z, double theta) {
  const Complex q = z * std::polar(1.0, -theta);
  return q * q / (1.0 - q);
}

// E|W_2(z)|^2 for CUE(N) and v = e_1 by quadrature over the Weyl density
// prod |e^{i a} - e^{i b}|^2 / (N! (2 pi)^N). The overlap vector is Dirichlet(1,...,1)
// and independent of the phases: E x_j^2 = 2/(N(N+1)), E x_j x_k = 1/(N(N+1)).
double quadrature_var_w2(int n, Complex z, int grid) {
  const double h = kTwoPi / grid;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double total = 0.0, mass = 0.0;
  double factorial = 1.0;
  for (int k = 2; k <= n; ++k) factorial *= k;
  const double nn = n * (n + 1.0);
  while (true) {
    std::vector<double> th(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) th[static_cast<std::size_t>(j)] = h * idx[static_cast<std::size_t>(j)];
    double density = 1.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        density *= std::norm(std::polar(1.0, th[static_cast<std::size_t>(a)]) - std::polar(1.0, th[static_cast<std::size_t>(b)]));
    density /= factorial * std::pow(kTwoPi, n);
    double second = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double weight = (a == b ? 2.0 : 1.0) / nn;
        second += weight * (w2_kernel(z, th[static_cast<std::size_t>(a)]) *
                            std::conj(w2_kernel(z, th[static_cast<std::size_t>(b)]))).real();
      }
    total += density * second;
    mass += density;
    int j = 0;
    while (j < n && ++idx[static_cast<std::size_t>(j)] == grid) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == n) break;
  }
  const double cell = std::pow(h, n);
  CHECK(mass * cell == doctest::Approx(1.0).epsilon(1e-12));
  return total * cell;
}

}  // namespace

TEST_CASE("exact variance of W2 matches quadrature over the CUE density") {
  for (double r : {0.3, 0.5, 0.8}) {
    const VarianceW2 v = exact_var_w2(2, r);
    CHECK(v.exact == doctest::Approx(quadrature_var_w2(2, r, 256)).epsilon(1e-10));
  }
  const Complex z = std::polar(0.5, 1.1);
  CHECK(exact_var_w2(3, z).exact == doctest::Approx(quadrature_var_w2(3, z, 72)).epsilon(1e-9));
  // N = 1: W_2 = sum_{m >= 2} (z e^{-i theta})^m, variance x^2 / (1 - x).
  CHECK(exact_var_w2(1, 0.6).exact == doctest::Approx(0.36 * 0.36 / 0.64).epsilon(1e-14));
}

TEST_CASE("exact variance: both closed forms agree and sit between the envelopes") {
  for (Index n : {3, 10, 50, 200, 500}) {
    for (int j = 1; j <= 9; ++j) {
      const VarianceW2 v = exact_var_w2(n, j / 10.0);
      CHECK(v.exact == doctest::Approx(v.alternate).epsilon(1e-13));
      CHECK(v.strictly_between);
      CHECK(v.lower < v.exact);
      CHECK(v.exact < v.upper);
    }
  }
}

TEST_CASE("Monte Carlo mean and variance of W2 at small N") {
  const std::vector<Complex> zs{0.4, Complex(0.0, 0.7)};
  for (const W2MomentReport& r : mc_w2_moments(8, zs, 2, MonteCarlo{4000, 12, 0})) {
    CHECK(r.mean.passed);
    CHECK(r.variance.passed);
    CHECK(r.scaled_moments.size() == 2);
  }
}

TEST_CASE("distinct-tuple average matches brute-force enumeration") {
  Engine gen(3);
  const RealVector phases = sample_cue_phases(6, gen);
  const std::vector<std::vector<int>> sets{{2}, {1, -1}, {1, -2, 1}, {3, 1, -2, -2}};
  for (const auto& a : sets) {
    const std::size_t m = a.size();
    std::vector<int> k(m, 0);
    Complex sum = 0.0;
    std::size_t count = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == m) {
        double phase = 0.0;
        for (std::size_t i = 0; i < m; ++i) phase += a[i] * phases(k[i]);
        sum += std::polar(1.0, phase);
        ++count;
        return;
      }
      for (int c = 0; c < 6; ++c) {
        bool used = false;
        for (std::size_t i = 0; i < pos; ++i) used = used || k[i] == c;
        if (used) continue;
        k[pos] = c;
        rec(pos + 1);
      }
    };
    rec(0);
    const Complex brute = sum / static_cast<double>(count);
    CHECK(std::abs(distinct_tuple_average(phases, a) - brute) < 1e-12);
  }
}

TEST_CASE("phase patterns reduce to per-label coefficients") {
  const ReducedPattern r = reduce_pattern(PhasePattern{{0, 1}, {1, 2}, {1, 2}, {2, 1}});
  CHECK(r.distinct_labels == 3);
  CHECK(r.coefficients == std::vector<int>{1, -1});
  const ReducedPattern zero = reduce_pattern(PhasePattern{{0}, {0}, {3}, {3}});
  CHECK(zero.coefficients.empty());
}

TEST_CASE("trace powers, two-phase averages, overlaps") {
  PhaseIdentityParams p;
  p.n = 8;
  p.trace_powers = {1, 3, 8, 12};
  p.two_theta_powers = {1, 4, 9};
  p.coefficient_sets = {{1, -1}, {2, -1, -1}};
  for (const IdentityReport& r : cue_phase_identities(p, MonteCarlo{4000, 5, 0})) CHECK_MESSAGE(r.passed, r.anchor);
  const OverlapReport o = eigvec_overlap_check(6, MonteCarlo{4000, 6, 0});
  CHECK(o.equal_indices.passed);
  CHECK(o.distinct_indices.passed);
  CHECK(o.normalization.passed);
}

TEST_CASE("Kostlan: squared radii after poissonization") {
  const KostlanReport r = kostlan_check(4, 1, 0.5, 0.06, MonteCarlo{3000, 17, 0});
  CHECK(r.passed());
  CHECK(r.ks_per_order.size() == 4);
  // Closed form at N = 2: (1 - 1/2)(1 - 1/4).
  CHECK(poissonized_empty_probability(2, 0.5) == doctest::Approx(0.375));
  CHECK(poissonized_two_inside_probability(0.9) == doctest::Approx(std::pow(0.9, 6)));
}

TEST_CASE("poissonized draw: t^2 in (0, 1) and |det| = t") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const PoissonizedDraw d = poissonized_spectrum(10, 2, RngStream{1, i});
    CHECK(d.t > 0.0);
    CHECK(d.t < 1.0);
    CHECK(std::abs(std::abs(d.snapshot.eigenvalues.prod()) - d.t) < 1e-10);
  }
}

TEST_CASE("averaged law: mean trace vanishes") {
  const AveragedLawReport r = check_averaged_law(20, 0.5, 0.1, 0.6, MonteCarlo{2000, 3, 0});
  CHECK(r.mean.passed);
  CHECK(r.passed());
}
