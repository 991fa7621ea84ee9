#include "uam/statistics.hpp"

#include "uam/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace uam {
namespace {

template <typename T>
MCEstimate<T> mean_of(std::span<const T> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "mean_estimate: need at least 2 samples");
  const double n = static_cast<double>(samples.size());
  T sum{};
  for (const T& x : samples) sum += x;
  const T mean = sum / n;
  double ss = 0.0;
  for (const T& x : samples) ss += std::norm(x - mean);
  MCEstimate<T> est;
  est.value = mean;
  est.std_error = std::sqrt(ss / (n - 1.0) / n);
  est.n_samples = samples.size();
  return est;
}

IdentityReport base(std::string anchor, ClaimKind kind, Complex claimed, Complex estimate, double se,
                    std::size_t n) {
  IdentityReport r;
  r.anchor = std::move(anchor);
  r.kind = kind;
  r.claimed = claimed;
  r.estimate = estimate;
  r.std_error = se;
  r.n_samples = n;
  return r;
}

double safe_ratio(double num, double se) {
  if (se > 0.0) return num / se;
  return num == 0.0 ? 0.0 : std::copysign(INFINITY, num);
}

}  // namespace

MCEstimate<double> mean_estimate(std::span<const double> samples) { return mean_of(samples); }
MCEstimate<Complex> mean_estimate(std::span<const Complex> samples) { return mean_of(samples); }

IdentityReport make_equality(std::string anchor, Complex claimed, const MCEstimate<Complex>& est) {
  IdentityReport r = base(std::move(anchor), ClaimKind::Equality, claimed, est.value, est.std_error,
                          est.n_samples);
  r.lineage = est.lineage;
  const double distance = std::abs(est.value - claimed);
  r.z_score = safe_ratio(distance, est.std_error);
  r.passed = distance <= 3.0 * est.std_error;
  return r;
}

IdentityReport make_equality(std::string anchor, double claimed, const MCEstimate<double>& est) {
  return make_equality(std::move(anchor), Complex(claimed),
                       MCEstimate<Complex>{est.value, est.std_error, est.n_samples, est.lineage});
}

IdentityReport make_upper_bound(std::string anchor, double bound, const MCEstimate<Complex>& est) {
  IdentityReport r = base(std::move(anchor), ClaimKind::UpperBound, bound, est.value, est.std_error,
                          est.n_samples);
  r.lineage = est.lineage;
  const double excess = std::abs(est.value) - bound;
  r.z_score = safe_ratio(excess, est.std_error);
  r.passed = excess <= 3.0 * est.std_error;
  return r;
}

IdentityReport make_upper_bound(std::string anchor, double bound, const MCEstimate<double>& est) {
  return make_upper_bound(std::move(anchor), bound,
                          MCEstimate<Complex>{est.value, est.std_error, est.n_samples, est.lineage});
}

IdentityReport make_exact(std::string anchor, double claimed, double computed, double tolerance) {
  IdentityReport r = base(std::move(anchor), ClaimKind::Equality, claimed, computed, 0.0, 1);
  r.passed = std::abs(computed - claimed) <= tolerance;
  r.z_score = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "exact, tolerance %.3g", tolerance);
  r.note = buf;
  return r;
}

double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "ks_one_sample: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double quantile(std::vector<double> samples, double p) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "quantile: no samples");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile: p must lie in [0, 1]");
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace uam
