#pragma once

#include "uam/core/errors.hpp"
#include "uam/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace uam {

/// Stream-id offsets, one per consumer, so that trial k of one experiment never
/// shares draws with trial k of another. Trial streams are `offset + trial`.
namespace stream_offset {
inline constexpr std::uint64_t kModel = 0;
inline constexpr std::uint64_t kTrajectories = 1ULL << 40;
inline constexpr std::uint64_t kSweep = 2ULL << 40;
inline constexpr std::uint64_t kCritical = 3ULL << 40;
inline constexpr std::uint64_t kIdentities = 4ULL << 40;
inline constexpr std::uint64_t kPoissonized = 5ULL << 40;
inline constexpr std::uint64_t kKostlanReference = 6ULL << 40;
inline constexpr std::uint64_t kOdeCompare = 7ULL << 40;
}  // namespace stream_offset

using Engine = std::mt19937_64;

/// A (seed, stream_id) pair names one independent, reproducible random stream.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Engine engine() const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x55414d4fU};
    return Engine(seq);
  }

  RngStream trial(std::uint64_t offset, std::uint64_t index) const {
    return {seed, offset + index};
  }

  Lineage lineage() const { return {seed, stream_id}; }
};

/// Standard complex Gaussian: E|z|^2 = 1.
template <typename Real = double, typename Gen>
std::complex<Real> complex_gaussian(Gen& gen) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  const Real re = normal(gen);
  const Real im = normal(gen);
  return std::complex<Real>(re, im) / std::sqrt(Real(2));
}

template <typename Real = double, typename Gen>
ComplexMatrixT<Real> sample_ginibre(Index rows, Index cols, Gen& gen) {
  ComplexMatrixT<Real> z(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) z(i, j) = complex_gaussian<Real>(gen);
  return z;
}

/// Haar unitary via QR of a Ginibre matrix. The phases of diag(R) are pushed into
/// Q; without that correction the QR output is not Haar distributed.
template <typename Real = double, typename Gen>
ComplexMatrixT<Real> sample_haar_unitary(Index n, Gen& gen) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample_haar_unitary: n must be >= 1");
  const ComplexMatrixT<Real> z = sample_ginibre<Real>(n, n, gen);
  Eigen::HouseholderQR<ComplexMatrixT<Real>> qr(z);
  ComplexMatrixT<Real> q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const std::complex<Real> d = r(j, j);
    const Real mod = std::abs(d);
    const std::complex<Real> phase = mod > Real(0) ? d / mod : std::complex<Real>(1);
    q.col(j) *= phase;
  }
  return q;
}

template <typename Real = double>
ComplexMatrixT<Real> sample_haar_unitary(Index n, const RngStream& stream) {
  auto gen = stream.engine();
  return sample_haar_unitary<Real>(n, gen);
}

/// Uniform point on the complex unit sphere in C^n.
template <typename Real = double, typename Gen>
ComplexVectorT<Real> sample_unit_vector(Index n, Gen& gen) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample_unit_vector: n must be >= 1");
  ComplexVectorT<Real> v(n);
  for (;;) {
    for (Index i = 0; i < n; ++i) v(i) = complex_gaussian<Real>(gen);
    const Real norm = v.norm();
    if (norm > Real(0)) return v / norm;
  }
}

template <typename Real = double>
ComplexVectorT<Real> sample_unit_vector(Index n, const RngStream& stream) {
  auto gen = stream.engine();
  return sample_unit_vector<Real>(n, gen);
}

/// Beta(a, b) as X / (X + Y) with independent Gamma(a), Gamma(b).
template <typename Real = double, typename Gen>
Real sample_beta(Real a, Real b, Gen& gen) {
  if (!(a > Real(0)) || !(b > Real(0)))
    throw Error(ErrorCode::InvalidArgument,
                "sample_beta: parameters must be positive (a=" + std::to_string(a) +
                    ", b=" + std::to_string(b) + ")");
  std::gamma_distribution<Real> ga(a, Real(1));
  std::gamma_distribution<Real> gb(b, Real(1));
  for (;;) {
    const Real x = ga(gen);
    const Real y = gb(gen);
    const Real s = x + y;
    if (s > Real(0)) return x / s;
  }
}

template <typename Real = double>
Real sample_beta(Real a, Real b, const RngStream& stream) {
  auto gen = stream.engine();
  return sample_beta<Real>(a, b, gen);
}

}  // namespace uam
