#include "uam/hypergeometric.hpp"

#include "uam/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace uam {
namespace {

bool non_positive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

constexpr std::size_t kMaxTerms = 1'000'000;

}  // namespace

double pochhammer(double a, std::size_t n) {
  double p = 1.0;
  for (std::size_t k = 0; k < n; ++k) p *= a + static_cast<double>(k);
  return p;
}

double hyp2f1(double a, double b, double c, double x) {
  if (non_positive_integer(c))
    throw Error(ErrorCode::InvalidArgument, "hyp2f1: c is a non-positive integer");
  const bool terminates = non_positive_integer(a) || non_positive_integer(b);
  if (!terminates && !(x < 1.0))
    throw Error(ErrorCode::Divergence, "hyp2f1: series diverges for x >= 1");
  if (!terminates && x < 0.0)
    throw Error(ErrorCode::InvalidArgument, "hyp2f1: x must lie in [0, 1)");

  // Kahan-compensated partial sums.
  double sum = 1.0, carry = 0.0, term = 1.0;
  for (std::size_t n = 0; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * x;
    term *= ratio;
    if (term == 0.0) return sum;  // polynomial case reached (a)_n = 0 or (b)_n = 0, or x = 0
    const double y = term - carry;
    const double next = sum + y;
    carry = (next - sum) - y;
    sum = next;

    // Once the term ratio is positive, below one and decreasing the tail is
    // bounded by a geometric series with the next ratio.
    const double r = (a + dn + 1.0) * (b + dn + 1.0) / ((c + dn + 1.0) * (dn + 2.0)) * x;
    if (!terminates && r >= 0.0 && r < 1.0) {
      const double tail = std::abs(term) * r / (1.0 - r);
      if (tail <= 1e-16 * std::abs(sum)) return sum;
    }
  }
  throw Error(ErrorCode::Divergence, "hyp2f1: no convergence within the term budget");
}

double hyp2f1_euler(double a, double b, double c, double x) {
  return std::pow(1.0 - x, c - a - b) * hyp2f1(c - a, c - b, c, x);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is always an integer; divide first where possible to limit growth.
    const std::uint64_t g = std::gcd(r, i);
    const std::uint64_t rr = r / g, ii = i / g;
    if (num % ii != 0 || rr > std::numeric_limits<std::uint64_t>::max() / (num / ii))
      throw Error(ErrorCode::InvalidArgument, "binomial: overflow");
    r = rr * (num / ii);
  }
  return r;
}

namespace {

// counts[L] += number of M-tuples with sum L, for all L <= L_max, by depth-first enumeration.
void enumerate(unsigned slots_left, unsigned sum, unsigned L_max, std::vector<std::uint64_t>& counts) {
  if (slots_left == 0) {
    ++counts[sum];
    return;
  }
  for (unsigned l = 0; sum + l <= L_max; ++l) enumerate(slots_left - 1, sum + l, L_max, counts);
}

std::vector<std::uint64_t> composition_table(unsigned L_max, unsigned M) {
  std::vector<std::uint64_t> counts(L_max + 1, 0);
  enumerate(M, 0, L_max, counts);
  return counts;
}

}  // namespace

std::uint64_t count_compositions(unsigned L, unsigned M) {
  if (M == 0) return L == 0 ? 1 : 0;
  return composition_table(L, M)[L];
}

PartitionSumReport partition_sum_identity(unsigned M, double x, unsigned L_max, double tol) {
  if (M < 1) throw Error(ErrorCode::InvalidArgument, "partition_sum_identity: M must be >= 1");
  if (!(x >= 0.0 && x < 1.0))
    throw Error(ErrorCode::InvalidArgument, "partition_sum_identity: x must lie in [0, 1)");

  PartitionSumReport r;
  r.M = M;
  r.x = x;
  r.L_max = L_max;

  // Pairs (l, l') with equal sums L contribute counts[L]^2 terms of x^L each.
  const std::vector<std::uint64_t> counts = composition_table(L_max, M);
  double power = 1.0;
  for (unsigned L = 0; L <= L_max; ++L) {
    const double c = static_cast<double>(counts[L]);
    r.brute_force += c * c * power;
    const double b = static_cast<double>(binomial(L + M - 1, M - 1));
    r.binomial_series += b * b * power;
    power *= x;
  }
  r.hypergeometric = hyp2f1(M, M, 1.0, x);

  // Term ratio ((L + M) / (L + 1))^2 x decreases in L, so the tail after L_max is
  // dominated by a geometric series started at L_max + 1.
  const double first = std::pow(static_cast<double>(binomial(L_max + M, M - 1)), 2) *
                       std::pow(x, static_cast<double>(L_max + 1));
  const double ratio = std::pow((L_max + 1.0 + M) / (L_max + 2.0), 2) * x;
  r.tail_bound = ratio < 1.0 ? first / (1.0 - ratio) : std::numeric_limits<double>::infinity();

  const double scale = std::max(1.0, std::abs(r.hypergeometric));
  r.truncated_discrepancy = std::abs(r.brute_force - r.binomial_series);
  r.full_discrepancy = std::abs(r.binomial_series - r.hypergeometric);
  r.passed = r.truncated_discrepancy <= tol * scale &&
             r.full_discrepancy <= r.tail_bound + tol * scale;
  return r;
}

}  // namespace uam
