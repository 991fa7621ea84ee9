#pragma once

#include "uam/model.hpp"
#include "uam/statistics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace uam {

/// Shared Monte Carlo knobs. Trial i draws from stream (seed, offset + i).
struct MonteCarlo {
  std::size_t trials = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Exact variance of W_2(z) for CUE and its two envelopes, x = |z|^2:
///   Var = 2x^2 / ((N+1)(1-x)) - sum_{l=2}^N (N-l) x^l / (N(N+1))
/// `alternate` evaluates the equivalent positive-sum form
///   x^2 / ((N+1)(1-x)) + x^{N+1} / ((N+1)(1-x)) + sum_{l=2}^N l x^l / (N(N+1)).
struct VarianceW2 {
  double exact = 0.0;
  double alternate = 0.0;
  double lower = 0.0;  // x^2 / ((N+1)(1-x))
  double upper = 0.0;  // 2x^2 / ((N+1)(1-x))
  bool strictly_between = false;
};

VarianceW2 exact_var_w2(Index n, Complex z);

/// Phases of a Haar unitary, ascending in [0, 2pi).
RealVector sample_cue_phases(Index n, Engine& gen);

/// W_2(z_c) for v = e_1 and a fresh CUE matrix per trial: samples(i, c).
ComplexMatrix sample_w2(Index n, std::span<const Complex> zs, const MonteCarlo& mc);

struct W2MomentReport {
  Complex z;
  Index n = 0;
  IdentityReport mean;      // E W_2 = 0
  IdentityReport variance;  // E |W_2|^2 = exact_var_w2
  /// E |W_2|^{2M} N^M (1-|z|)^{2M-1} / |z|^{4M} for M = 1..M_max; should stay O(1) in N.
  std::vector<MCEstimate<double>> scaled_moments;
};

std::vector<W2MomentReport> mc_w2_moments(Index n, std::span<const Complex> zs, int M_max,
                                          const MonteCarlo& mc);

struct DominationPoint {
  Complex z;
  double quantile = 0.0;   // of |W_2| sqrt(N) (1-|z|) / |z|^2
  double threshold = 0.0;  // N^eps
  bool passed = false;
};

struct DominationReport {
  Index n = 0;
  double eps = 0.0;
  double level = 0.0;  // 1 - 1/N
  std::size_t trials = 0;
  std::vector<DominationPoint> points;
  bool passed() const;
};

/// Requires 0.05 <= |z| < 1 - N^{-delta} on the whole grid.
DominationReport mc_domination_w2(Index n, std::span<const Complex> zs, double eps, double delta,
                                  const MonteCarlo& mc);

/// Average of exp(i sum_l a_l theta_{k_l}) over all ordered tuples of distinct
/// indices k_1..k_m of one phase sample (Moebius inversion over set partitions
/// of the power sums, O(Bell(m) N)).
Complex distinct_tuple_average(const RealVector& phases, std::span<const int> coefficients);

/// exp(i sum_j l_j theta_{k_j} - l'_j theta_{k'_j}) for an abstract index pattern:
/// equal labels denote equal indices, different labels distinct indices.
struct PhasePattern {
  std::vector<int> k, k_prime;
  std::vector<int> l, l_prime;  // all >= 1
};

/// Distinct labels and the nonzero per-label coefficients of a pattern.
struct ReducedPattern {
  std::size_t distinct_labels = 0;
  std::vector<int> coefficients;  // nonzero only
};
ReducedPattern reduce_pattern(const PhasePattern& pattern);

struct PhaseIdentityParams {
  Index n = 20;
  std::vector<int> trace_powers;                   // E|tr U^l|^2 = min(l, N)
  std::vector<int> two_theta_powers;               // E e^{il(theta_1 - theta_2)} = -(N-l)_+/(N(N-1))
  std::vector<std::vector<int>> coefficient_sets;  // |E e^{i sum a_l theta_{k_l}}| < m! N^{1-m}
  std::vector<PhasePattern> patterns;              // < (2M)! N^{M - #labels}
};

/// One report per claim, all claims evaluated on the same phase samples.
std::vector<IdentityReport> cue_phase_identities(const PhaseIdentityParams& params, const MonteCarlo& mc);

struct OverlapReport {
  IdentityReport equal_indices;     // E|r_k1|^4 = 2 / (N(N+1))
  IdentityReport distinct_indices;  // E|r_k1|^2 |r_k'1|^2 = 1 / (N(N+1))
  IdentityReport normalization;     // sum over all pairs = 1
};

OverlapReport eigvec_overlap_check(Index n, const MonteCarlo& mc);

/// Spectrum of G(t) with t^2 ~ Beta(k, N) and a fresh (U, v).
struct PoissonizedDraw {
  double t = 0.0;
  SpectrumSnapshot snapshot;
};

PoissonizedDraw poissonized_spectrum(Index n, int k, const RngStream& stream, bool negative_branch = false);

struct KostlanReport {
  Index n = 0;
  int k = 0;
  std::size_t trials = 0;
  std::vector<double> ks_per_order;  // sorted squared radii vs sorted independent betas
  double max_ks = 0.0;
  double ks_threshold = 0.0;
  double a = 0.0;
  IdentityReport all_outside;  // P(all |lambda|^2 > a) = prod_j (1 - a^{k+j-1})
  IdentityReport radii_sum;    // E sum |lambda|^2 = sum_j (k+j-1)/(k+j)
  bool passed() const;
};

KostlanReport kostlan_check(Index n, int k, double a, double ks_threshold, const MonteCarlo& mc);

struct AveragedLawReport {
  Index n = 0;
  Complex z;
  double level = 0.0;
  double quantile = 0.0;  // of |(1/N) tr((zU*)^2 (I - zU*)^{-1})| N (1-|z|)^2 / |z|^2
  double threshold = 0.0;
  IdentityReport mean;    // E tr(...) = 0
  bool passed() const;
};

AveragedLawReport check_averaged_law(Index n, Complex z, double eps, double delta, const MonteCarlo& mc);

}  // namespace uam
