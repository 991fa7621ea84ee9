#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>

namespace uam {

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = RealVectorT<double>;
using Index = Eigen::Index;

/// Where a random object came from: enough to regenerate it bit for bit.
struct Lineage {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  friend bool operator==(const Lineage&, const Lineage&) = default;
};

/// ||U^* U - I||_max
template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

/// Argument mapped into [0, 2*pi).
template <typename Real>
Real phase_in_circle(const std::complex<Real>& z) {
  constexpr Real two_pi = Real(2) * Real(3.14159265358979323846264338327950288L);
  Real a = std::arg(z);
  if (a < Real(0)) a += two_pi;
  if (a >= two_pi) a -= two_pi;
  return a;
}

}  // namespace uam
