#include "uam/model.hpp"

#include "uam/core/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace uam {
namespace {

constexpr double kUnitarityTol = 1e-10;
constexpr double kNormTol = 1e-12;
constexpr double kOverlapSumTol = 1e-8;
constexpr double kNearSingular = 1e-13;
constexpr double kDegenerateOmega = 1e-13;
constexpr double kInteriorMargin = 1e-6;

}  // namespace

UAModel::UAModel(ComplexMatrix u, ComplexVector v, std::optional<Lineage> lineage)
    : u_(std::move(u)), v_(std::move(v)), lineage_(lineage) {
  if (u_.rows() != u_.cols() || u_.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "UAModel: U must be square and non-empty");
  if (v_.size() != u_.rows())
    throw Error(ErrorCode::InvalidArgument, "UAModel: v has the wrong length");
  if (std::abs(v_.norm() - 1.0) > kNormTol)
    throw Error(ErrorCode::InvalidArgument,
                "UAModel: v must be a unit vector (norm " + std::to_string(v_.norm()) + ")");

  SpectralTolerances tol;
  tol.unitarity = kUnitarityTol;
  const EigenSystem eig = unitary_eigensystem(u_, tol);
  const Index n = u_.rows();
  eigenvalues_ = eig.eigenvalues;
  eigenvectors_ = *eig.right_vectors;
  phases_.resize(n);
  overlaps_.resize(n);
  const ComplexVector projections = eigenvectors_.adjoint() * v_;
  for (Index j = 0; j < n; ++j) {
    phases_(j) = phase_in_circle(eigenvalues_(j));
    overlaps_(j) = std::norm(projections(j));
  }
  if (std::abs(overlaps_.sum() - 1.0) > kOverlapSumTol)
    throw Error(ErrorCode::InvalidArgument, "UAModel: overlaps do not sum to 1");
}

UAModel UAModel::sample_cue(Index n, const RngStream& stream) {
  auto gen = stream.engine();
  ComplexMatrix u = sample_haar_unitary(n, gen);
  ComplexVector v = sample_unit_vector(n, gen);
  return UAModel(std::move(u), std::move(v), stream.lineage());
}

ComplexMatrix assemble(const UAModel& model, double t) {
  const ComplexMatrix& u = model.unitary();
  if (t == 1.0) return u;
  const ComplexVector uv = u * model.vector();
  return u - (1.0 - t) * uv * model.vector().adjoint();
}

Complex omega1(const UAModel& model) {
  const double n = static_cast<double>(model.dim());
  // v^* U^* v = (U v)^* v
  const ComplexVector uv = model.unitary() * model.vector();
  return std::sqrt(n) * uv.dot(model.vector());
}

double ResolventEval::decomposition_defect() const {
  return std::abs(W - s1 - W2) / std::max(1.0, std::abs(W));
}

ResolventEval resolvent_eval(const UAModel& model, Complex z) {
  if (!(std::abs(z) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "resolvent_eval: requires |z| < 1");
  const auto& x = model.overlaps();
  const auto& lambda = model.unitary_eigenvalues();
  Complex w{0.0}, w2{0.0};
  double closest = 2.0;
  for (Index j = 0; j < model.dim(); ++j) {
    const Complex q = z * std::conj(lambda(j));
    const Complex denom = 1.0 - q;
    closest = std::min(closest, std::abs(denom));
    w += x(j) / denom;
    w2 += x(j) * q * q / denom;
  }
  if (closest < kNearSingular)
    throw Error(ErrorCode::NearSingular, "resolvent_eval: z too close to the spectrum of U");
  const double n = static_cast<double>(model.dim());
  const Complex s1 = 1.0 + omega1(model) / std::sqrt(n) * z;
  return {z, w, w2, s1};
}

Complex resolvent_derivative(const UAModel& model, Complex z) {
  if (!(std::abs(z) < 1.0))
    throw Error(ErrorCode::InvalidArgument, "resolvent_derivative: requires |z| < 1");
  const auto& x = model.overlaps();
  const auto& lambda = model.unitary_eigenvalues();
  Complex d{0.0};
  for (Index j = 0; j < model.dim(); ++j) {
    const Complex conj_l = std::conj(lambda(j));
    const Complex denom = 1.0 - z * conj_l;
    d += x(j) * conj_l / (denom * denom);
  }
  return d;
}

Complex expected_outlier_location(Complex omega, Index n, double t) {
  if (t == 1.0) throw Error(ErrorCode::InvalidArgument, "expected_outlier_location: t = 1");
  if (std::abs(omega) < kDegenerateOmega)
    throw Error(ErrorCode::DegenerateOmega, "expected_outlier_location: |omega_1| < 1e-13");
  return std::sqrt(static_cast<double>(n)) / omega * (t / (1.0 - t));
}

Complex expected_outlier_location(const UAModel& model, double t) {
  return expected_outlier_location(omega1(model), model.dim(), t);
}

SpectrumSnapshot spectrum(const UAModel& model, double t, const SpectrumOptions& options) {
  if (!(t >= -1.0 && t <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "spectrum: t must lie in [-1, 1]");
  SpectrumSnapshot snap;
  snap.t = t;
  snap.lineage = model.lineage();
  if (t == 1.0) {
    snap.eigenvalues = model.unitary_eigenvalues();
    snap.residual = 0.0;
    return snap;
  }
  const ComplexMatrix g = assemble(model, t);
  if (options.schur_residual) {
    snap.eigenvalues = eigenvalues_only(g, &snap.residual);
  } else {
    snap.eigenvalues = eigenvalues_only(g);
    snap.residual = std::abs(snap.eigenvalues.sum() - g.trace());
  }
  return snap;
}

CharacterizationReport verify_characterization(const UAModel& model, double t, double tol) {
  if (!(t > -1.0 && t < 1.0))
    throw Error(ErrorCode::InvalidArgument, "verify_characterization: t must lie in (-1, 1)");
  CharacterizationReport report;
  report.t = t;
  report.tolerance = tol;
  const SpectrumSnapshot snap = spectrum(model, t);
  for (Index j = 0; j < snap.size(); ++j) {
    const Complex z = snap.eigenvalues(j);
    if (!(std::abs(z) < 1.0 - kInteriorMargin)) {
      ++report.skipped_boundary;
      continue;
    }
    const ResolventEval r = resolvent_eval(model, z);
    const double residual = std::abs(r.W * (1.0 - t) - 1.0);
    report.checked.push_back(z);
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
  }
  report.passed = report.max_residual < tol;
  return report;
}

StructureReport verify_structure(const UAModel& model, double t) {
  if (t == 0.0)
    throw Error(ErrorCode::SingularInput, "verify_structure: G(0) is singular");
  StructureReport report;
  report.t = t;

  const ComplexMatrix g = assemble(model, t);
  const ComplexMatrix g_dual = assemble(model, 1.0 / t);
  Eigen::PartialPivLU<ComplexMatrix> lu(g);
  report.inverse_defect = max_abs(ComplexMatrix(lu.inverse() - g_dual.adjoint()));
  report.inverse_ok = report.inverse_defect < 1e-8;

  const RealVector s = singular_values(g);
  RealVector expected = RealVector::Ones(s.size());
  // Descending order: |t| goes last when |t| <= 1 and first otherwise.
  if (std::abs(t) <= 1.0)
    expected(s.size() - 1) = std::abs(t);
  else
    expected(0) = std::abs(t);
  report.singular_value_defect = (s - expected).cwiseAbs().maxCoeff();
  report.singular_values_ok = report.singular_value_defect < 1e-9;

  if (std::abs(t) == 1.0) {
    const ComplexVector lambda = eigenvalues_only(g);
    double worst = 0.0;
    for (Index j = 0; j < lambda.size(); ++j)
      worst = std::max(worst, std::abs(std::abs(lambda(j)) - 1.0));
    report.modulus_defect = worst;
    report.modulus_ok = worst < 1e-9;
  }
  return report;
}

}  // namespace uam
