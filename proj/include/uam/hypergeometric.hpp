#pragma once

#include <cstddef>
#include <cstdint>

namespace uam {

/// Gauss 2F1(a, b; c; x) = sum_n (a)_n (b)_n / (c)_n x^n / n! for real 0 <= x < 1.
///
/// Summation stops once the remaining tail is provably below 1e-16 of the partial
/// sum (the term ratio has settled below one), or exactly when a or b is a
/// non-positive integer. Throws InvalidArgument for c in {0, -1, ...} and
/// Divergence for x >= 1 with a non-terminating series.
double hyp2f1(double a, double b, double c, double x);

/// Euler's transformation (1 - x)^{c - a - b} 2F1(c - a, c - b; c; x).
double hyp2f1_euler(double a, double b, double c, double x);

/// Rising factorial (a)_n.
double pochhammer(double a, std::size_t n);

/// Exact binomial coefficient (throws InvalidArgument on 64-bit overflow).
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of M-tuples of non-negative integers summing to L, by enumeration.
std::uint64_t count_compositions(unsigned L, unsigned M);

struct PartitionSumReport {
  unsigned M = 0;
  double x = 0.0;
  unsigned L_max = 0;
  double brute_force = 0.0;      // sum over enumerated tuple pairs of x^{sum l}
  double binomial_series = 0.0;  // sum_{L <= L_max} binom(L + M - 1, M - 1)^2 x^L
  double hypergeometric = 0.0;   // 2F1(M, M; 1; x)
  double tail_bound = 0.0;       // bound on sum_{L > L_max} of the series
  double truncated_discrepancy = 0.0;  // |brute_force - binomial_series|
  double full_discrepancy = 0.0;       // |binomial_series - hypergeometric|
  bool passed = false;
};

/// Three routes to sum_{L >= 0} binom(L + M - 1, M - 1)^2 x^L = 2F1(M, M; 1; x).
/// Passes when the truncated routes agree to `tol` (relative) and the
/// hypergeometric value lies within tail_bound + tol of the truncated sum.
PartitionSumReport partition_sum_identity(unsigned M, double x, unsigned L_max, double tol = 1e-10);

}  // namespace uam
