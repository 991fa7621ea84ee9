#pragma once

#include "uam/core/random.hpp"
#include "uam/core/spectral.hpp"
#include "uam/core/types.hpp"

#include <optional>
#include <vector>

namespace uam {

/// The pair (U, v) defining G(t) = U (I - (1 - t) v v^*), together with the
/// spectral data of U that every observable is built from: phases theta_j in
/// [0, 2pi) (ascending), eigenvectors u_j and overlaps |<u_j|v>|^2.
class UAModel {
 public:
  /// Validates ||U*U - I||_max <= 1e-10, ||v|| = 1 within 1e-12 and that the
  /// overlaps sum to 1 within 1e-8. Throws NotUnitary / InvalidArgument.
  UAModel(ComplexMatrix u, ComplexVector v, std::optional<Lineage> lineage = std::nullopt);

  /// CUE matrix and an independent uniform unit vector, both from `stream`.
  static UAModel sample_cue(Index n, const RngStream& stream);

  Index dim() const { return u_.rows(); }
  const ComplexMatrix& unitary() const { return u_; }
  const ComplexVector& vector() const { return v_; }
  const RealVector& phases() const { return phases_; }
  const ComplexVector& unitary_eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }
  const RealVector& overlaps() const { return overlaps_; }
  const std::optional<Lineage>& lineage() const { return lineage_; }

 private:
  ComplexMatrix u_;
  ComplexVector v_;
  RealVector phases_;
  ComplexVector eigenvalues_;
  ComplexMatrix eigenvectors_;
  RealVector overlaps_;
  std::optional<Lineage> lineage_;
};

/// G(t) = U A(t) with A(t) = I - (1 - t) v v^*. Returns U exactly at t = 1.
ComplexMatrix assemble(const UAModel& model, double t);

/// omega_1 = sqrt(N) v^* U^* v, computed from the matrix (not the spectral sum).
Complex omega1(const UAModel& model);

/// W(z), W_2(z) and s_1(z) at one point of the open unit disk.
struct ResolventEval {
  Complex z;
  Complex W;
  Complex W2;
  Complex s1;

  /// |W - s_1 - W_2| / max(1, |W|); the three are evaluated independently.
  double decomposition_defect() const;
};

/// Spectral-sum evaluation: W = sum_j x_j / (1 - z e^{-i theta_j}) and
/// W_2 = sum_j x_j (z e^{-i theta_j})^2 / (1 - z e^{-i theta_j}), x_j = |<u_j|v>|^2.
/// Throws InvalidArgument for |z| >= 1, NearSingular when z is within 1e-13 of Sp(U).
ResolventEval resolvent_eval(const UAModel& model, Complex z);

/// W'(z) by the same spectral sum; used by diagnostics.
Complex resolvent_derivative(const UAModel& model, Complex z);

/// z_t = (sqrt(N) / omega_1) t / (1 - t), the root of s_1(z) = 1 / (1 - t).
/// Throws DegenerateOmega if |omega_1| < 1e-13, InvalidArgument for t = 1.
Complex expected_outlier_location(const UAModel& model, double t);
Complex expected_outlier_location(Complex omega, Index n, double t);

struct SpectrumOptions {
  /// Compute the Schur residual ||G Z - Z T||_max instead of the trace defect.
  bool schur_residual = false;
};

/// Eigenvalues of G(t) at one time. `residual` is the trace defect
/// |sum lambda_j - tr G(t)| unless the Schur residual was requested.
struct SpectrumSnapshot {
  double t = 1.0;
  ComplexVector eigenvalues;
  double residual = 0.0;
  std::optional<Lineage> lineage;

  Index size() const { return eigenvalues.size(); }
};

/// Spectrum of G(t), t in [-1, 1]. At t = 1 the cached eigenvalues of U are returned.
SpectrumSnapshot spectrum(const UAModel& model, double t, const SpectrumOptions& options = {});

struct CharacterizationReport {
  double t = 0.0;
  double tolerance = 0.0;
  std::vector<Complex> checked;  // interior eigenvalues, |z| < 1 - 1e-6
  std::vector<double> residuals;  // |W(z)(1 - t) - 1|
  std::size_t skipped_boundary = 0;
  double max_residual = 0.0;
  bool passed = true;
};

/// Every interior eigenvalue z of G(t) must solve W(z) = 1/(1 - t).
CharacterizationReport verify_characterization(const UAModel& model, double t, double tol);

struct StructureReport {
  double t = 0.0;
  double inverse_defect = 0.0;         // ||G(t)^{-1} - G(1/t)^*||_max
  double singular_value_defect = 0.0;  // vs {1, ..., 1, |t|}
  std::optional<double> modulus_defect;  // t = +-1 only: max | |lambda| - 1 |
  bool inverse_ok = false;
  bool singular_values_ok = false;
  bool modulus_ok = true;

  bool passed() const { return inverse_ok && singular_values_ok && modulus_ok; }
};

/// Checks G(t)^{-1} = G(1/t)^* (< 1e-8), singular values {1, ..., 1, |t|} (< 1e-9)
/// and, for t = +-1, unimodular eigenvalues (< 1e-9). Throws SingularInput at t = 0.
StructureReport verify_structure(const UAModel& model, double t);

}  // namespace uam
