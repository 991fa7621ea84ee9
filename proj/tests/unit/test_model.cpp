#include "uam/core/errors.hpp"
#include "uam/core/random.hpp"
#include "uam/model.hpp"
#include "uam/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace uam;

namespace {

// Resolvent by a dense linear solve, independent of the spectral sums.
Complex dense_w(const UAModel& m, Complex z) {
  const Index n = m.dim();
  const ComplexMatrix a = ComplexMatrix::Identity(n, n) - z * m.unitary().adjoint();
  const ComplexVector x = a.partialPivLu().solve(m.vector());
  return m.vector().dot(x);
}

}  // namespace

TEST_CASE("sampled unitary is unitary and the overlaps sum to one") {
  const UAModel m = UAModel::sample_cue(30, RngStream{3, 0});
  const ComplexMatrix& u = m.unitary();
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(m.overlaps().sum() - 1.0) < 1e-12);
  CHECK(std::abs(m.vector().norm() - 1.0) < 1e-13);
}

TEST_CASE("non-unitary input is rejected") {
  ComplexMatrix u = ComplexMatrix::Identity(3, 3);
  u(0, 0) = 1.01;
  ComplexVector v = ComplexVector::Zero(3);
  v(0) = 1.0;
  CHECK_THROWS_AS(UAModel(u, v), Error);
}

TEST_CASE("omega_1 modulus squared over N follows the first-coordinate law of a uniform sphere vector") {
  // Oracle: |g_1|^2 / sum |g_k|^2 for complex Gaussians g, whose CDF is 1 - (1-x)^(N-1).
  constexpr Index n = 6;
  std::vector<double> sampled, oracle;
  Engine gen(99);
  for (std::size_t i = 0; i < 3000; ++i) {
    const UAModel m = UAModel::sample_cue(n, RngStream{11, i});
    sampled.push_back(std::norm(omega1(m)) / n);
    ComplexVector g(n);
    for (Index k = 0; k < n; ++k) g(k) = complex_gaussian(gen);
    oracle.push_back(std::norm(g(0)) / g.squaredNorm());
  }
  const auto cdf = [](double x) { return 1.0 - std::pow(1.0 - x, n - 1); };
  CHECK(ks_one_sample(sampled, cdf) < 0.035);
  CHECK(ks_two_sample(sampled, oracle) < 0.05);
}

TEST_CASE("resolvent spectral sums agree with a dense solve") {
  const UAModel m = UAModel::sample_cue(12, RngStream{5, 0});
  for (Complex z : {Complex(0.3, 0.1), Complex(-0.6, 0.5), Complex(0.0, 0.9)}) {
    const ResolventEval r = resolvent_eval(m, z);
    CHECK(std::abs(r.W - dense_w(m, z)) < 1e-12);
    CHECK(r.decomposition_defect() < 1e-12);
  }
  CHECK_THROWS_AS(resolvent_eval(m, Complex(1.0, 0.0)), Error);
}

TEST_CASE("one-dimensional model: G(t) = t U") {
  ComplexMatrix u(1, 1);
  u(0, 0) = std::polar(1.0, 0.7);
  ComplexVector v(1);
  v(0) = 1.0;
  const UAModel m(u, v);
  for (double t : {0.9, 0.3, -0.4}) {
    const SpectrumSnapshot s = spectrum(m, t);
    CHECK(std::abs(s.eigenvalues(0) - t * u(0, 0)) < 1e-15);
  }
}

TEST_CASE("interior eigenvalues solve W(z) = 1/(1-t)") {
  const UAModel m = UAModel::sample_cue(25, RngStream{8, 1});
  for (double t : {0.7, 0.1, -0.5}) {
    const CharacterizationReport r = verify_characterization(m, t, 1e-8);
    CHECK(r.passed);
    CHECK(r.checked.size() == 25);
  }
}

TEST_CASE("G(t) has singular values {1,...,1,|t|} and G(t)^-1 = G(1/t)^*") {
  const UAModel m = UAModel::sample_cue(15, RngStream{9, 0});
  for (double t : {0.5, -0.2, 1.0, -1.0}) CHECK(verify_structure(m, t).passed());
  CHECK_THROWS_AS(verify_structure(m, 0.0), Error);
}

TEST_CASE("outlier location matches the root of s_1 = 1/(1-t)") {
  const UAModel m = UAModel::sample_cue(40, RngStream{2, 0});
  const double t = 0.01;
  const Complex zt = expected_outlier_location(m, t);
  const Complex w = omega1(m);
  // s_1 is the first-order part of W: 1 + z omega_1 / sqrt(N).
  const Complex s1 = 1.0 + zt * w / std::sqrt(40.0);
  CHECK(std::abs(s1 - 1.0 / (1.0 - t)) < 1e-12);
}
