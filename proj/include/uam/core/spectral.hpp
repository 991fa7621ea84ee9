#pragma once

#include "uam/core/types.hpp"

#include <optional>
#include <vector>

namespace uam {

/// Accuracy contract for the dense eigensolvers. Defaults suit N up to a few
/// hundred; large sweeps may loosen them.
struct SpectralTolerances {
  double unitarity = 1e-10;      // precondition on ||U*U - I||_max
  double residual = 1e-10;       // per-eigenpair ||M r - lambda r|| (unitary input)
  double orthonormality = 1e-8;  // ||Z*Z - I||_max of returned unitary eigenvectors
  double max_condition = 1e12;   // ||L_j|| ||R_j|| above this is a near-defective matrix
};

/// Eigenvalues with optional unit-norm right vectors and bi-orthogonal left vectors.
///
/// Ordering: by argument in [0, 2pi) for unitary input, otherwise by modulus and
/// then argument. `left_vectors` (when present) satisfy L_j^* R_j = 1.
struct EigenSystem {
  ComplexVector eigenvalues;
  std::optional<ComplexMatrix> right_vectors;
  std::optional<ComplexMatrix> left_vectors;
  RealVector residuals;

  Index size() const { return eigenvalues.size(); }
};

/// Eigen-decomposition of a unitary matrix from its complex Schur form, so the
/// eigenvectors are orthonormal even for clustered phases.
/// Throws NotUnitary or NonConvergence.
EigenSystem unitary_eigensystem(const ComplexMatrix& u, const SpectralTolerances& tol = {});

/// General dense eigenproblem. With `want_left`, left vectors come from the rows
/// of R^{-1}. Throws NonConvergence, DegenerateNormalization.
EigenSystem general_eigensystem(const ComplexMatrix& m, bool want_left,
                                const SpectralTolerances& tol = {});

/// Eigenvalues only (one Schur factorization, no vectors), unsorted.
/// When `schur_residual` is given it receives ||M Z - Z T||_max, which needs Z.
ComplexVector eigenvalues_only(const ComplexMatrix& m, double* schur_residual = nullptr);

/// Descending singular values.
RealVector singular_values(const ComplexMatrix& m);

/// Sort permutation: by argument for `by_phase`, else by modulus then argument.
std::vector<Index> spectral_order(const ComplexVector& values, bool by_phase);

}  // namespace uam
