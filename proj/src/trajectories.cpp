#include "uam/trajectories.hpp"

#include "uam/assignment.hpp"
#include "uam/core/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace uam {
namespace {

Eigen::MatrixXd distance_matrix(const ComplexVector& from, const ComplexVector& to) {
  const Index n = from.size();
  Eigen::MatrixXd d(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) d(i, j) = std::abs(from(i) - to(j));
  return d;
}

struct MatchedStep {
  ComplexVector values;  // values(i) continues path i
  double cost = 0.0;
  double swap_gap = 0.0;
  double max_displacement = 0.0;
  bool separated = true;  // nearest-neighbour margin satisfied
};

MatchedStep match(const ComplexVector& previous, const ComplexVector& next, double margin) {
  const Eigen::MatrixXd d = distance_matrix(previous, next);
  const Assignment a = solve_assignment(d);
  MatchedStep step;
  const Index n = previous.size();
  step.values.resize(n);
  step.cost = a.cost;
  step.swap_gap = smallest_swap_gap(d, a);
  for (Index i = 0; i < n; ++i) {
    const Index j = a.column_of_row[i];
    step.values(i) = next(j);
    step.max_displacement = std::max(step.max_displacement, d(i, j));
    for (Index k = 0; k < n; ++k) {
      if (k != i && d(i, j) > margin * d(k, j)) step.separated = false;
    }
  }
  return step;
}

class Tracker {
 public:
  Tracker(const UAModel& model, const TrackOptions& options, TrajectoryBundle& out)
      : model_(model), options_(options), out_(out) {}

  void advance(double ta, const ComplexVector& previous, double tb, int depth, bool requested) {
    const ComplexVector next = spectrum(model_, tb).eigenvalues;
    MatchedStep step = match(previous, next, options_.neighbour_margin);
    const bool acceptable =
        step.max_displacement <= options_.max_displacement && step.separated;
    if (!acceptable && depth < options_.max_depth) {
      ++out_.refinements;
      const double mid = 0.5 * (ta + tb);
      advance(ta, previous, mid, depth + 1, false);
      const ComplexVector middle = columns_.back();
      advance(mid, middle, tb, depth + 1, requested);
      return;
    }
    if (step.swap_gap < options_.ambiguity_tolerance) out_.ambiguous_steps.push_back(out_.t.size());
    out_.t.push_back(tb);
    out_.requested.push_back(requested ? 1 : 0);
    out_.matching_cost.push_back(step.cost);
    out_.refinement_depth.push_back(depth);
    columns_.push_back(std::move(step.values));
  }

  void seed(const ComplexVector& anchor) {
    out_.t.push_back(1.0);
    out_.requested.push_back(1);
    out_.matching_cost.push_back(0.0);
    out_.refinement_depth.push_back(0);
    columns_.push_back(anchor);
  }

  ComplexMatrix assemble_paths() const {
    ComplexMatrix paths(model_.dim(), static_cast<Index>(columns_.size()));
    for (std::size_t i = 0; i < columns_.size(); ++i) paths.col(static_cast<Index>(i)) = columns_[i];
    return paths;
  }

  const ComplexVector& last() const { return columns_.back(); }

 private:
  const UAModel& model_;
  const TrackOptions& options_;
  TrajectoryBundle& out_;
  std::vector<ComplexVector> columns_;
};

void check_grid_monotone(std::span<const double> grid, const char* who) {
  if (grid.size() < 2) return;
  const bool decreasing = grid[1] < grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool ok = decreasing ? grid[i] < grid[i - 1] : grid[i] > grid[i - 1];
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(who) + ": grid must be strictly monotone");
  }
}

}  // namespace

TrajectoryBundle TrajectoryBundle::requested_only() const {
  TrajectoryBundle out;
  out.lineage = lineage;
  std::vector<Index> keep;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (requested[i]) keep.push_back(static_cast<Index>(i));
  out.paths.resize(paths.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto i = static_cast<std::size_t>(keep[k]);
    out.t.push_back(t[i]);
    out.requested.push_back(1);
    if (!matching_cost.empty()) out.matching_cost.push_back(matching_cost[i]);
    if (!refinement_depth.empty()) out.refinement_depth.push_back(refinement_depth[i]);
    out.paths.col(static_cast<Index>(k)) = paths.col(keep[k]);
  }
  out.refinements = refinements;
  return out;
}

std::vector<double> linear_grid(double from, double to, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "linear_grid: count must be >= 2");
  std::vector<double> grid(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = from + (to - from) * (static_cast<double>(i) / n);
  grid.back() = to;
  return grid;
}

std::vector<double> geometric_grid(double from, double to, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "geometric_grid: count must be >= 2");
  if (!(from * to > 0.0))
    throw Error(ErrorCode::InvalidArgument, "geometric_grid: endpoints must be non-zero with equal sign");
  const double sign = from > 0.0 ? 1.0 : -1.0;
  const double a = std::log(std::abs(from));
  const double b = std::log(std::abs(to));
  std::vector<double> grid(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = sign * std::exp(a + (b - a) * (static_cast<double>(i) / n));
  grid.front() = from;
  grid.back() = to;
  return grid;
}

TrajectoryBundle track(const UAModel& model, std::span<const double> grid, const TrackOptions& options) {
  if (grid.empty() || grid.front() != 1.0)
    throw Error(ErrorCode::InvalidArgument, "track: grid must start at the anchor t = 1");
  for (double t : grid)
    if (!(t > -1.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "track: grid must lie in (-1, 1]");
  check_grid_monotone(grid, "track");

  TrajectoryBundle bundle;
  bundle.lineage = model.lineage();
  Tracker tracker(model, options, bundle);
  tracker.seed(model.unitary_eigenvalues());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const ComplexVector previous = tracker.last();
    tracker.advance(grid[i - 1], previous, grid[i], 0, true);
  }
  bundle.paths = tracker.assemble_paths();
  return bundle;
}

ComplexVector ode_vector_field(double t, const ComplexVector& lambdas, int sign, double collision_eps) {
  if (t == 0.0 || t == 1.0)
    throw Error(ErrorCode::TimeSingularity, "ode_vector_field: the field is singular at t = 0 and t = 1");
  if (!(t > 0.0 && t < 1.0))
    throw Error(ErrorCode::InvalidArgument, "ode_vector_field: t must lie in (0, 1)");
  const double time_factor = t * (t * t - 1.0);
  if (!std::isnormal(time_factor))
    throw Error(ErrorCode::TimeSingularity, "ode_vector_field: t (t^2 - 1) underflows");

  const Index n = lambdas.size();
  Complex product{1.0};
  for (Index k = 0; k < n; ++k) product *= lambdas(k);

  ComplexVector field(n);
  for (Index j = 0; j < n; ++j) {
    const Complex lj = lambdas(j);
    Complex coupling{1.0};
    for (Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const Complex gap = lj - lambdas(k);
      if (std::abs(gap) < collision_eps)
        throw Error(ErrorCode::CollisionSingularity,
                    "ode_vector_field: eigenvalues " + std::to_string(j) + " and " + std::to_string(k) +
                        " collide");
      coupling *= (lj * std::conj(lambdas(k)) - 1.0) / gap;
    }
    field(j) = static_cast<double>(sign) * (1.0 - std::norm(lj)) / time_factor * product * coupling;
  }
  return field;
}

ComplexVector initial_velocity(const UAModel& model) {
  return model.unitary_eigenvalues().cwiseProduct(model.overlaps().cast<Complex>());
}

SignCalibration calibrate_ode_sign(std::uint64_t seed, double t) {
  constexpr double h = 1e-6;
  SignCalibration out;
  double ratio_sum = 0.0;
  const RngStream root{seed, 0};
  for (Index n = 1; n <= 3; ++n) {
    const UAModel model = UAModel::sample_cue(n, root.trial(stream_offset::kModel, static_cast<std::uint64_t>(n)));
    const ComplexVector centre = spectrum(model, t).eigenvalues;
    const MatchedStep plus = match(centre, spectrum(model, t + h).eigenvalues, 0.5);
    const MatchedStep minus = match(centre, spectrum(model, t - h).eigenvalues, 0.5);
    const ComplexVector fd = (plus.values - minus.values) / (2.0 * h);
    const ComplexVector printed = ode_vector_field(t, centre, +1);
    for (Index j = 0; j < n; ++j) {
      const double r = (fd(j) / printed(j)).real();
      out.ratios.push_back(r);
      ratio_sum += r;
    }
  }
  out.sign = ratio_sum < 0.0 ? -1 : 1;
  for (double r : out.ratios) out.worst_deviation = std::max(out.worst_deviation, std::abs(r - out.sign));
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
// b - b*, the embedded error weights.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

class DormandPrince {
 public:
  DormandPrince(const OdeOptions& options, OdeStats& stats) : options_(options), stats_(stats) {}

  ComplexVector field(double t, const ComplexVector& y) const {
    return ode_vector_field(t, y, kOdeSign, options_.collision_eps);
  }

  // Advances `state` to exactly `target` (< state.t).
  void integrate_to(OdeState& state, double target) {
    std::size_t steps = 0;
    while (state.t > target) {
      if (++steps > options_.max_steps)
        throw Error(ErrorCode::StepCollapse, "integrate_ode: step budget exhausted at t = " +
                                                  std::to_string(state.t));
      double h = std::min(state.step, state.t - target);
      const bool lands = h >= state.t - target;
      if (h < options_.min_step && !lands)
        throw Error(ErrorCode::StepCollapse, "integrate_ode: step size underflow at t = " +
                                                  std::to_string(state.t));
      ComplexVector next;
      double err = 0.0;
      try {
        err = attempt(state, h, next);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::CollisionSingularity) throw;
        ++stats_.collision_rejections;
        state.step = 0.25 * h;
        have_k1_ = false;
        continue;
      }
      if (err <= 1.0) {
        ++stats_.accepted;
        state.t = lands ? target : state.t - h;
        state.lambdas = std::move(next);
        state.error_estimate = err;
        k1_ = k7_;
        have_k1_ = true;
      } else {
        ++stats_.rejected;
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // Keep the natural step when the last step was truncated to hit the target.
      if (!(lands && err <= 1.0 && h < state.step)) state.step = h * factor;
    }
  }

 private:
  // One trial step of size h (moving toward smaller t); returns the scaled error norm.
  double attempt(const OdeState& s, double h, ComplexVector& out) {
    const double t = s.t;
    const ComplexVector& y = s.lambdas;
    const double dt = -h;
    if (!have_k1_) {
      k1_ = field(t, y);
      have_k1_ = true;
    }
    const ComplexVector k2 = field(t + kC[1] * dt, y + dt * (kA21 * k1_));
    const ComplexVector k3 = field(t + kC[2] * dt, y + dt * (kA31 * k1_ + kA32 * k2));
    const ComplexVector k4 = field(t + kC[3] * dt, y + dt * (kA41 * k1_ + kA42 * k2 + kA43 * k3));
    const ComplexVector k5 =
        field(t + kC[4] * dt, y + dt * (kA51 * k1_ + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const ComplexVector k6 = field(
        t + kC[5] * dt, y + dt * (kA61 * k1_ + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    out = y + dt * (kB1 * k1_ + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    k7_ = field(t + dt, out);
    const ComplexVector err = dt * (kE1 * k1_ + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7_);
    double worst = 0.0;
    for (Index j = 0; j < y.size(); ++j) {
      const double scale = options_.atol + options_.rtol * std::max(std::abs(y(j)), std::abs(out(j)));
      worst = std::max(worst, std::abs(err(j)) / scale);
    }
    return worst;
  }

  const OdeOptions& options_;
  OdeStats& stats_;
  ComplexVector k1_, k7_;
  bool have_k1_ = false;
};

}  // namespace

TrajectoryBundle integrate_ode(const UAModel& model, std::span<const double> grid,
                               const OdeOptions& options, OdeStats* stats) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "integrate_ode: empty grid");
  for (double t : grid)
    if (!(t > 0.0 && t <= 1.0))
      throw Error(ErrorCode::InvalidArgument, "integrate_ode: grid must lie in (0, 1]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] < grid[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "integrate_ode: grid must be strictly decreasing");

  OdeStats local_stats;
  OdeStats& st = stats ? *stats : local_stats;

  TrajectoryBundle bundle;
  bundle.lineage = model.lineage();
  bundle.paths.resize(model.dim(), static_cast<Index>(grid.size()));

  const ComplexVector anchor = model.unitary_eigenvalues();
  const ComplexVector velocity = initial_velocity(model);
  const double h0 = options.initial_step;

  // Leave t = 1 along the explicit initial velocity: the field is 0/0 there.
  OdeState state;
  state.t = 1.0 - h0;
  state.lambdas = anchor - h0 * velocity;
  state.step = h0;

  DormandPrince stepper(options, st);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double target = grid[i];
    ComplexVector value;
    if (target == 1.0) {
      value = anchor;
    } else if (target >= state.t) {
      value = anchor - (1.0 - target) * velocity;  // inside the Taylor step
    } else {
      stepper.integrate_to(state, target);
      value = state.lambdas;
    }
    bundle.t.push_back(target);
    bundle.requested.push_back(1);
    bundle.refinement_depth.push_back(0);
    bundle.paths.col(static_cast<Index>(i)) = value;
  }
  return bundle;
}

double max_deviation(const TrajectoryBundle& a, const TrajectoryBundle& b) {
  if (a.path_count() != b.path_count())
    throw Error(ErrorCode::InvalidArgument, "max_deviation: bundles have different path counts");
  double worst = 0.0;
  std::size_t shared = 0;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    if (!a.requested[i]) continue;
    for (std::size_t k = 0; k < b.t.size(); ++k) {
      if (!b.requested[k] || std::abs(a.t[i] - b.t[k]) > 1e-14) continue;
      ++shared;
      worst = std::max(worst, max_abs(ComplexVector(a.paths.col(static_cast<Index>(i)) -
                                                    b.paths.col(static_cast<Index>(k)))));
      break;
    }
  }
  if (shared == 0) throw Error(ErrorCode::InvalidArgument, "max_deviation: bundles share no grid point");
  return worst;
}

double normwise_relative(const ComplexVector& a, const ComplexVector& b) {
  const double scale = max_abs(b);
  const double diff = max_abs(ComplexVector(a - b));
  return scale > 0.0 ? diff / scale : diff;
}

double min_pairwise_distance(const ComplexVector& values) {
  double best = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < values.size(); ++j)
    for (Index k = j + 1; k < values.size(); ++k) best = std::min(best, std::abs(values(j) - values(k)));
  return best;
}

DynamicsReport validate_dynamics(const UAModel& model, double t, double fd_step) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::InvalidArgument, "validate_dynamics: t must lie in (0, 1)");
  if (!(t - fd_step > 0.0 && t + fd_step < 1.0))
    throw Error(ErrorCode::InvalidArgument, "validate_dynamics: finite-difference stencil leaves (0, 1)");

  DynamicsReport report;
  report.t = t;
  const EigenSystem es = general_eigensystem(assemble(model, t), true);
  const ComplexMatrix& right = *es.right_vectors;
  const ComplexMatrix& left = *es.left_vectors;
  const ComplexVector& v = model.vector();
  const ComplexVector uv = model.unitary() * v;
  report.eigenvalues = es.eigenvalues;

  const Index n = model.dim();
  report.perturbative.resize(n);
  report.perturbative_direct.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Complex v_r = v.dot(right.col(j));   // <v|R_j>
    const Complex l_v = left.col(j).dot(v);    // <L_j|v>
    const Complex l_uv = left.col(j).dot(uv);  // <L_j|U|v>
    report.perturbative(j) = es.eigenvalues(j) / t * l_v * v_r;
    report.perturbative_direct(j) = l_uv * v_r;
  }

  const MatchedStep plus = match(es.eigenvalues, spectrum(model, t + fd_step).eigenvalues, 0.5);
  const MatchedStep minus = match(es.eigenvalues, spectrum(model, t - fd_step).eigenvalues, 0.5);
  report.finite_difference = (plus.values - minus.values) / (2.0 * fd_step);
  report.field = ode_vector_field(t, es.eigenvalues, kOdeSign);

  report.perturbative_vs_fd = normwise_relative(report.perturbative, report.finite_difference);
  report.field_vs_fd = normwise_relative(report.field, report.finite_difference);
  report.field_vs_perturbative = normwise_relative(report.field, report.perturbative);
  report.direct_vs_perturbative = normwise_relative(report.perturbative_direct, report.perturbative);
  report.min_pairwise_distance = min_pairwise_distance(es.eigenvalues);
  return report;
}

}  // namespace uam
