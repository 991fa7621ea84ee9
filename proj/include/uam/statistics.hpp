#pragma once

#include "uam/core/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uam {

/// Sample mean with its standard error.
template <typename T>
struct MCEstimate {
  T value{};
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::optional<Lineage> lineage;
};

MCEstimate<double> mean_estimate(std::span<const double> samples);
MCEstimate<Complex> mean_estimate(std::span<const Complex> samples);

enum class ClaimKind { Equality, UpperBound };

/// One claimed identity or bound confronted with a Monte Carlo estimate.
///
/// Equality passes iff |estimate - claimed| <= 3 stderr. UpperBound compares the
/// modulus of the estimate: |estimate| <= claimed + 3 stderr.
struct IdentityReport {
  std::string anchor;  // human-readable name of the claim
  ClaimKind kind = ClaimKind::Equality;
  Complex claimed{};
  Complex estimate{};
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double z_score = 0.0;  // distance to the claim in units of stderr (signed for bounds)
  bool passed = false;
  std::optional<Lineage> lineage;
  std::string note;
};

IdentityReport make_equality(std::string anchor, Complex claimed, const MCEstimate<Complex>& est);
IdentityReport make_equality(std::string anchor, double claimed, const MCEstimate<double>& est);
IdentityReport make_upper_bound(std::string anchor, double bound, const MCEstimate<Complex>& est);
IdentityReport make_upper_bound(std::string anchor, double bound, const MCEstimate<double>& est);

/// Deterministic claim (no sampling): passes iff |computed - claimed| <= tolerance.
IdentityReport make_exact(std::string anchor, double claimed, double computed, double tolerance);

/// sup_x |F_n(x) - cdf(x)|.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Linear-interpolation quantile (Hyndman-Fan type 7), p in [0, 1].
double quantile(std::vector<double> samples, double p);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

}  // namespace uam
