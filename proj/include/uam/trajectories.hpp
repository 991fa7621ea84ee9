#pragma once

#include "uam/model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace uam {

/// Global sign multiplying the closed-form eigenvalue ODE
///   lambda_j' = (1 - |lambda_j|^2) / (t (t^2 - 1)) * prod_k lambda_k
///               * prod_{k != j} (lambda_j conj(lambda_k) - 1) / (lambda_j - lambda_k)
/// so that it matches the true flow of G(t). Calibrated against finite differences
/// of the eigensolver spectrum; see calibrate_ode_sign() and its test.
inline constexpr int kOdeSign = -1;

/// N continuous eigenvalue paths over a common t-grid. Path j starts at the
/// j-th eigenvalue of U (ascending phase) at t = 1.
struct TrajectoryBundle {
  std::vector<double> t;
  std::vector<char> requested;   // 1 where t[i] belongs to the caller's grid
  ComplexMatrix paths;           // paths(j, i) = lambda_j(t[i])
  std::vector<double> matching_cost;  // optimal assignment cost into t[i] (0 at the anchor)
  std::vector<int> refinement_depth;  // bisection depth that produced t[i]
  std::vector<std::size_t> ambiguous_steps;  // indices i whose matching was not unique
  std::size_t refinements = 0;  // number of bisections performed
  std::optional<Lineage> lineage;

  Index path_count() const { return paths.rows(); }
  std::size_t time_count() const { return t.size(); }

  /// Same bundle restricted to the caller's grid points.
  TrajectoryBundle requested_only() const;
};

std::vector<double> linear_grid(double from, double to, std::size_t count);
/// Log-spaced grid between two non-zero endpoints of equal sign.
std::vector<double> geometric_grid(double from, double to, std::size_t count);

struct TrackOptions {
  double max_displacement = 0.05;  // delta_track
  /// A matched point must be at most this fraction of its distance to any other
  /// predecessor away from its own predecessor.
  double neighbour_margin = 0.5;
  int max_depth = 20;
  double ambiguity_tolerance = 1e-12;
};

/// Continuation tracking: solve the eigenproblem on the grid, match consecutive
/// snapshots by minimum total distance, and bisect steps until every matched
/// displacement is <= max_displacement (or max_depth is reached).
/// The grid must start at t = 1 and be strictly monotone inside (-1, 1].
TrajectoryBundle track(const UAModel& model, std::span<const double> grid,
                       const TrackOptions& options = {});

/// Right-hand side of the eigenvalue ODE times `sign`, for t in (0, 1).
/// Throws CollisionSingularity when two eigenvalues are closer than
/// `collision_eps`, TimeSingularity at t in {0, 1} or when t (t^2 - 1) underflows.
ComplexVector ode_vector_field(double t, const ComplexVector& lambdas, int sign = kOdeSign,
                               double collision_eps = 1e-10);

/// lambda_j'(1) = e^{i theta_j} |<u_j|v>|^2 (the field itself is 0/0 at t = 1).
ComplexVector initial_velocity(const UAModel& model);

struct SignCalibration {
  int sign = 0;
  std::vector<double> ratios;  // Re(finite difference / unsigned field), every eigenvalue
  double worst_deviation = 0.0;  // max |ratio - sign|
};

/// Fits the global ODE sign on random models of size 1, 2, 3.
SignCalibration calibrate_ode_sign(std::uint64_t seed, double t = 0.6);

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 1e-6;  // Taylor step off t = 1
  double min_step = 1e-14;
  double collision_eps = 1e-10;
  std::size_t max_steps = 2'000'000;
};

/// Integrator state between accepted steps.
struct OdeState {
  double t = 1.0;
  ComplexVector lambdas;
  double step = 0.0;
  double error_estimate = 0.0;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t collision_rejections = 0;
};

/// Integrates the eigenvalue ODE from t = 1 down the (strictly decreasing) grid,
/// which must lie in (0, 1]. Adaptive Dormand-Prince 5(4); the first step leaves
/// t = 1 with the explicit initial velocity. Throws StepCollapse.
TrajectoryBundle integrate_ode(const UAModel& model, std::span<const double> grid,
                               const OdeOptions& options = {}, OdeStats* stats = nullptr);

/// Largest |difference| between two bundles over the t values they share
/// (requested points only). Paths are compared index by index.
double max_deviation(const TrajectoryBundle& a, const TrajectoryBundle& b);

struct DynamicsReport {
  double t = 0.0;
  ComplexVector eigenvalues;
  ComplexVector perturbative;         // lambda_j / t <L_j|v><v|R_j>
  ComplexVector perturbative_direct;  // <L_j|U|v><v|R_j>
  ComplexVector finite_difference;    // centered, step fd_step
  ComplexVector field;                // ode_vector_field with kOdeSign
  double perturbative_vs_fd = 0.0;    // normwise relative discrepancies
  double field_vs_fd = 0.0;
  double field_vs_perturbative = 0.0;
  double direct_vs_perturbative = 0.0;
  double min_pairwise_distance = 0.0;
};

/// Cross-checks the three routes to lambda'(t) at one time t in (0, 1).
DynamicsReport validate_dynamics(const UAModel& model, double t, double fd_step = 1e-6);

/// max_j |a_j - b_j| / max_j |b_j|
double normwise_relative(const ComplexVector& a, const ComplexVector& b);

double min_pairwise_distance(const ComplexVector& values);

}  // namespace uam
