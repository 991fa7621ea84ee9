#include "uam/core/spectral.hpp"

#include "uam/core/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

// OpenBLAS threading is disabled when present: parallelism lives at the trial
// level, and single-threaded kernels keep results independent of core count.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace uam {
namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, std::string(who) + ": matrix must be square and non-empty");
}

template <typename Perm>
ComplexMatrix permute_columns(const ComplexMatrix& m, const Perm& order) {
  ComplexMatrix out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j) out.col(j) = m.col(order[j]);
  return out;
}

struct SingleThreadedBlas {
  SingleThreadedBlas() {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  }
} const single_threaded_blas;

struct Schur {
  ComplexMatrix t;  // upper triangular
  ComplexMatrix z;  // unitary Schur vectors (empty unless requested)
};

// Complex Schur form M = Z T Z^* (LAPACK zgees).
Schur schur(const ComplexMatrix& m, bool want_vectors, const char* who) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Schur out{m, ComplexMatrix(want_vectors ? m.rows() : 1, want_vectors ? m.rows() : 1)};
  ComplexVector w(m.rows());
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'N', nullptr, n,
                                        out.t.data(), n, &sdim, w.data(), out.z.data(), want_vectors ? n : 1);
  if (info != 0)
    throw Error(ErrorCode::NonConvergence, std::string(who) + ": Schur iteration failed (zgees info " +
                                               std::to_string(info) + ")");
  out.t.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

}  // namespace

std::vector<Index> spectral_order(const ComplexVector& values, bool by_phase) {
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  if (by_phase) {
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return phase_in_circle(values(a)) < phase_in_circle(values(b));
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double ma = std::abs(values(a));
      const double mb = std::abs(values(b));
      if (ma != mb) return ma < mb;
      return phase_in_circle(values(a)) < phase_in_circle(values(b));
    });
  }
  return order;
}

EigenSystem unitary_eigensystem(const ComplexMatrix& u, const SpectralTolerances& tol) {
  require_square(u, "unitary_eigensystem");
  const double defect = unitarity_defect(u);
  if (!(defect <= tol.unitarity))
    throw Error(ErrorCode::NotUnitary,
                "unitary_eigensystem: ||U*U - I||_max = " + std::to_string(defect));

  const Schur sf = schur(u, true, "unitary_eigensystem");

  // U normal => T is diagonal up to rounding and Z holds orthonormal eigenvectors.
  const ComplexVector raw = sf.t.diagonal();
  const auto order = spectral_order(raw, true);

  EigenSystem out;
  const Index n = u.rows();
  out.eigenvalues.resize(n);
  for (Index j = 0; j < n; ++j) out.eigenvalues(j) = raw(order[j]);
  ComplexMatrix vectors = permute_columns(sf.z, order);

  out.residuals.resize(n);
  const ComplexMatrix uz = u * vectors;
  for (Index j = 0; j < n; ++j)
    out.residuals(j) = (uz.col(j) - out.eigenvalues(j) * vectors.col(j)).norm();

  const double worst = out.residuals.maxCoeff();
  if (!(worst <= tol.residual))
    throw Error(ErrorCode::NonConvergence,
                "unitary_eigensystem: residual " + std::to_string(worst) + " exceeds tolerance");
  const double ortho = unitarity_defect(vectors);
  if (!(ortho <= tol.orthonormality))
    throw Error(ErrorCode::NonConvergence,
                "unitary_eigensystem: eigenvectors not orthonormal (" + std::to_string(ortho) + ")");

  out.left_vectors = vectors;
  out.right_vectors = std::move(vectors);
  return out;
}

EigenSystem general_eigensystem(const ComplexMatrix& m, bool want_left,
                                const SpectralTolerances& tol) {
  require_square(m, "general_eigensystem");
  const Index n = m.rows();

  ComplexMatrix work = m;
  ComplexVector values(n);
  ComplexMatrix vectors(n, n);
  ComplexMatrix unused(1, 1);
  const lapack_int ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', ln, work.data(), ln, values.data(),
                                        unused.data(), 1, vectors.data(), ln);
  if (info != 0)
    throw Error(ErrorCode::NonConvergence, "general_eigensystem: eigensolver failed (zgeev info " +
                                               std::to_string(info) + ")");

  const bool unitary_input = unitarity_defect(m) <= tol.unitarity;
  const auto order = spectral_order(values, unitary_input);

  EigenSystem out;
  out.eigenvalues.resize(n);
  for (Index j = 0; j < n; ++j) out.eigenvalues(j) = values(order[j]);
  ComplexMatrix right = permute_columns(vectors, order);
  for (Index j = 0; j < n; ++j) right.col(j).normalize();

  out.residuals.resize(n);
  const ComplexMatrix mr = m * right;
  for (Index j = 0; j < n; ++j)
    out.residuals(j) = (mr.col(j) - out.eigenvalues(j) * right.col(j)).norm();

  if (want_left) {
    Eigen::FullPivLU<ComplexMatrix> lu(right);
    if (!lu.isInvertible())
      throw Error(ErrorCode::DegenerateNormalization,
                  "general_eigensystem: right eigenvectors are linearly dependent");
    // Rows of R^{-1} are the left eigenvectors (as row vectors L_j^*), with L_j^* R_k = delta_jk.
    const ComplexMatrix inverse = lu.inverse();
    ComplexMatrix left = inverse.adjoint();
    for (Index j = 0; j < n; ++j) {
      const double condition = left.col(j).norm() * right.col(j).norm();
      if (!(condition <= tol.max_condition))
        throw Error(ErrorCode::DegenerateNormalization,
                    "general_eigensystem: <L|R> ~ 0 for eigenvalue " + std::to_string(j) +
                        " (condition " + std::to_string(condition) + ")");
    }
    out.left_vectors = std::move(left);
  }
  out.right_vectors = std::move(right);
  return out;
}

ComplexVector eigenvalues_only(const ComplexMatrix& m, double* schur_residual) {
  require_square(m, "eigenvalues_only");
  const bool want_vectors = schur_residual != nullptr;
  const Schur sf = schur(m, want_vectors, "eigenvalues_only");
  if (want_vectors) *schur_residual = max_abs(m * sf.z - sf.z * sf.t);
  return sf.t.diagonal();
}

RealVector singular_values(const ComplexMatrix& m) {
  require_square(m, "singular_values");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  RealVector s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size(), std::greater<>());
  return s;
}

}  // namespace uam
