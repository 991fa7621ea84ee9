#include "uam/assignment.hpp"
#include "uam/core/errors.hpp"
#include "uam/model.hpp"
#include "uam/trajectories.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace uam;

namespace {

ComplexVector eig(const UAModel& m, double t) {
  Eigen::ComplexEigenSolver<ComplexMatrix> s(assemble(m, t), false);
  return s.eigenvalues();
}

// Finite-difference velocity, each eigenvalue matched to its nearest neighbour at t +- h.
ComplexVector fd_velocity(const UAModel& m, const ComplexVector& at, double t, double h) {
  const ComplexVector plus = eig(m, t + h), minus = eig(m, t - h);
  ComplexVector out(at.size());
  for (Index j = 0; j < at.size(); ++j) {
    Index ip = 0, im = 0;
    (plus.array() - at(j)).abs().minCoeff(&ip);
    (minus.array() - at(j)).abs().minCoeff(&im);
    out(j) = (plus(ip) - minus(im)) / (2.0 * h);
  }
  return out;
}

}  // namespace

TEST_CASE("ode sign calibration") {
  // The unsigned closed-form field is fitted against finite differences of the
  // eigensolver spectrum; the library constant must match what the data say.
  std::vector<double> ratios;
  for (Index n : {1, 2, 3, 5}) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const UAModel m = UAModel::sample_cue(n, RngStream{777, s});
      for (double t : {0.3, 0.6, 0.85}) {
        const ComplexVector lam = eig(m, t);
        const ComplexVector field = ode_vector_field(t, lam, +1);
        const ComplexVector fd = fd_velocity(m, lam, t, 1e-6);
        for (Index j = 0; j < n; ++j) ratios.push_back((fd(j) / field(j)).real());
      }
    }
  }
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
  CHECK(std::abs(mean - kOdeSign) < 1e-4);
  for (double r : ratios) CHECK(std::abs(r - kOdeSign) < 1e-3);

  const SignCalibration cal = calibrate_ode_sign(4242);
  CHECK(cal.sign == kOdeSign);
  CHECK(cal.worst_deviation < 1e-3);
}

TEST_CASE("one-dimensional paths are radial: lambda(t) = t e^{i theta}") {
  const UAModel m = UAModel::sample_cue(1, RngStream{1, 0});
  const Complex u = m.unitary()(0, 0);
  const std::vector<double> grid = linear_grid(1.0, -0.9, 20);
  const TrajectoryBundle b = track(m, grid);
  for (std::size_t k = 0; k < b.t.size(); ++k) CHECK(std::abs(b.paths(0, static_cast<Index>(k)) - b.t[k] * u) < 1e-14);
  const TrajectoryBundle ode = integrate_ode(m, linear_grid(1.0, 0.2, 9));
  for (std::size_t k = 0; k < ode.t.size(); ++k) CHECK(std::abs(ode.paths(0, static_cast<Index>(k)) - ode.t[k] * u) < 1e-8);
}

TEST_CASE("tracked steps respect the displacement bound and the determinant law") {
  const UAModel m = UAModel::sample_cue(10, RngStream{21, 0});
  const std::vector<double> grid = linear_grid(1.0, -0.95, 60);
  const TrajectoryBundle b = track(m, grid);
  CHECK(b.requested_only().t == grid);
  for (std::size_t k = 0; k < b.t.size(); ++k) {
    const ComplexVector col = b.paths.col(static_cast<Index>(k));
    // |det G(t)| = |t|
    CHECK(std::abs(std::abs(col.prod()) - std::abs(b.t[k])) < 1e-10);
    if (k > 0 && b.refinement_depth[k] < 20) {
      const double step = (col - b.paths.col(static_cast<Index>(k) - 1)).cwiseAbs().maxCoeff();
      CHECK(step <= 0.05 + 1e-12);
    }
  }
  // Paths begin at the eigenvalues of U in ascending phase.
  CHECK((b.paths.col(0) - m.unitary_eigenvalues()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("ODE and continuation tracking agree on small models") {
  const std::vector<double> grid = linear_grid(1.0, 0.2, 17);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const UAModel m = UAModel::sample_cue(3 + static_cast<Index>(s), RngStream{31, s});
    CHECK(max_deviation(track(m, grid).requested_only(), integrate_ode(m, grid)) < 1e-6);
  }
}

TEST_CASE("perturbative derivative matches finite differences") {
  const UAModel m = UAModel::sample_cue(6, RngStream{41, 0});
  const DynamicsReport r = validate_dynamics(m, 0.5);
  CHECK(r.perturbative_vs_fd < 1e-6);
  CHECK(r.direct_vs_perturbative < 1e-10);
  CHECK(r.field_vs_fd < 1e-6);
}

TEST_CASE("grid validation and singular times") {
  const UAModel m = UAModel::sample_cue(3, RngStream{1, 0});
  const std::vector<double> bad{0.9, 0.5};
  CHECK_THROWS_AS(track(m, bad), Error);
  const std::vector<double> through_zero{1.0, 0.5, 0.0};
  CHECK_THROWS_AS(integrate_ode(m, through_zero), Error);
  const ComplexVector lam = eig(m, 0.5);
  CHECK_THROWS_AS(ode_vector_field(0.0, lam), Error);
  CHECK_THROWS_AS(ode_vector_field(1.0, lam), Error);
}

TEST_CASE("assignment is optimal against exhaustive permutations") {
  Engine gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + rep % 5;
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = u(gen);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += cost(i, perm[static_cast<std::size_t>(i)]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const Assignment a = solve_assignment(cost);
    CHECK(a.cost == doctest::Approx(best).epsilon(1e-12));
    CHECK(smallest_swap_gap(cost, a) >= -1e-12);
  }
}
