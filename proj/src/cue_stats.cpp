#include "uam/cue_stats.hpp"

#include "uam/core/errors.hpp"
#include "uam/core/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <string>

namespace uam {
namespace {

RngStream trial_stream(const MonteCarlo& mc, std::uint64_t offset, std::size_t i) {
  return RngStream{mc.seed, 0}.trial(offset, i);
}

void require_trials(const MonteCarlo& mc, std::size_t minimum, const char* who) {
  if (mc.trials < minimum)
    throw Error(ErrorCode::InvalidArgument,
                std::string(who) + ": needs at least " + std::to_string(minimum) + " trials");
}

Lineage lineage_of(const MonteCarlo& mc) { return {mc.seed, 0}; }

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// N (N-1) ... (N-m+1)
double falling_factorial(Index n, std::size_t m) {
  double f = 1.0;
  for (std::size_t i = 0; i < m; ++i) f *= static_cast<double>(n) - static_cast<double>(i);
  return f;
}

// All set partitions of {0..m-1} as restricted growth strings.
void partitions(std::size_t m, std::vector<int>& current, int blocks, std::vector<std::vector<int>>& out) {
  if (current.size() == m) {
    out.push_back(current);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    current.push_back(b);
    partitions(m, current, std::max(blocks, b + 1), out);
    current.pop_back();
  }
}

struct PartitionTerm {
  double mobius = 1.0;
  std::vector<int> block_sums;
};

std::vector<PartitionTerm> moebius_terms(std::span<const int> coefficients) {
  std::vector<std::vector<int>> all;
  std::vector<int> current;
  partitions(coefficients.size(), current, 0, all);
  std::vector<PartitionTerm> terms;
  terms.reserve(all.size());
  for (const auto& labels : all) {
    const int blocks = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<int> sums(static_cast<std::size_t>(blocks), 0);
    std::vector<int> sizes(static_cast<std::size_t>(blocks), 0);
    for (std::size_t l = 0; l < labels.size(); ++l) {
      sums[static_cast<std::size_t>(labels[l])] += coefficients[l];
      ++sizes[static_cast<std::size_t>(labels[l])];
    }
    PartitionTerm term;
    // mu(partition, finest) = prod_B (-1)^{|B|-1} (|B|-1)!
    for (int s : sizes) term.mobius *= ((s - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(s - 1);
    term.block_sums = std::move(sums);
    terms.push_back(std::move(term));
  }
  return terms;
}

Complex power_sum(const RealVector& phases, int a) {
  Complex s{0.0};
  for (Index k = 0; k < phases.size(); ++k) s += std::polar(1.0, a * phases(k));
  return s;
}

Complex distinct_average(const RealVector& phases, const std::vector<PartitionTerm>& terms, std::size_t m) {
  std::map<int, Complex> cache;
  Complex total{0.0};
  for (const PartitionTerm& term : terms) {
    Complex product{term.mobius};
    for (int s : term.block_sums) {
      auto it = cache.find(s);
      if (it == cache.end()) it = cache.emplace(s, power_sum(phases, s)).first;
      product *= it->second;
    }
    total += product;
  }
  return total / falling_factorial(phases.size(), m);
}

std::vector<RealVector> phase_samples(Index n, const MonteCarlo& mc) {
  return parallel_map<RealVector>(mc.trials, mc.workers, [&](std::size_t i) {
    Engine gen = trial_stream(mc, stream_offset::kIdentities, i).engine();
    return sample_cue_phases(n, gen);
  });
}

template <typename T>
MCEstimate<T> estimate(const std::vector<T>& samples, const MonteCarlo& mc) {
  MCEstimate<T> e = mean_estimate(std::span<const T>(samples));
  e.lineage = lineage_of(mc);
  return e;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string join(std::span<const int> xs) {
  std::string s = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + ")";
}

}  // namespace

VarianceW2 exact_var_w2(Index n, Complex z) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "exact_var_w2: N must be >= 1");
  const double x = std::norm(z);
  if (!(x < 1.0)) throw Error(ErrorCode::InvalidArgument, "exact_var_w2: requires |z| < 1");
  const double N = static_cast<double>(n);
  VarianceW2 out;
  out.lower = x * x / ((N + 1.0) * (1.0 - x));
  out.upper = 2.0 * out.lower;

  double correction = 0.0, positive = 0.0, power = x;
  for (Index l = 2; l <= n; ++l) {
    power *= x;
    correction += (N - static_cast<double>(l)) * power;
    positive += static_cast<double>(l) * power;
  }
  out.exact = out.upper - correction / (N * (N + 1.0));
  out.alternate = out.lower + std::pow(x, N + 1.0) / ((N + 1.0) * (1.0 - x)) + positive / (N * (N + 1.0));
  out.strictly_between = out.lower < out.exact && out.exact < out.upper;
  return out;
}

RealVector sample_cue_phases(Index n, Engine& gen) {
  const ComplexVector lambda = eigenvalues_only(sample_haar_unitary(n, gen));
  RealVector phases(n);
  for (Index j = 0; j < n; ++j) phases(j) = phase_in_circle(lambda(j));
  std::sort(phases.data(), phases.data() + n);
  return phases;
}

ComplexMatrix sample_w2(Index n, std::span<const Complex> zs, const MonteCarlo& mc) {
  for (const Complex& z : zs)
    if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::InvalidArgument, "sample_w2: requires |z| < 1");
  const auto rows = parallel_map<ComplexVector>(mc.trials, mc.workers, [&](std::size_t i) {
    Engine gen = trial_stream(mc, stream_offset::kIdentities, i).engine();
    const EigenSystem eig = unitary_eigensystem(sample_haar_unitary(n, gen));
    const ComplexMatrix& vectors = *eig.right_vectors;
    ComplexVector w2(static_cast<Index>(zs.size()));
    for (std::size_t c = 0; c < zs.size(); ++c) {
      Complex sum{0.0};
      for (Index j = 0; j < n; ++j) {
        const Complex q = zs[c] * std::conj(eig.eigenvalues(j));
        sum += std::norm(vectors(0, j)) * q * q / (1.0 - q);
      }
      w2(static_cast<Index>(c)) = sum;
    }
    return w2;
  });
  ComplexMatrix out(static_cast<Index>(mc.trials), static_cast<Index>(zs.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = rows[i].transpose();
  return out;
}

std::vector<W2MomentReport> mc_w2_moments(Index n, std::span<const Complex> zs, int M_max,
                                          const MonteCarlo& mc) {
  require_trials(mc, 100, "mc_w2_moments");
  if (M_max < 1) throw Error(ErrorCode::InvalidArgument, "mc_w2_moments: M_max must be >= 1");
  const ComplexMatrix samples = sample_w2(n, zs, mc);
  const double N = static_cast<double>(n);

  std::vector<W2MomentReport> reports;
  for (std::size_t c = 0; c < zs.size(); ++c) {
    const Complex z = zs[c];
    const double r = std::abs(z);
    W2MomentReport rep;
    rep.z = z;
    rep.n = n;
    std::vector<Complex> values(mc.trials);
    std::vector<double> squares(mc.trials);
    for (std::size_t i = 0; i < mc.trials; ++i) {
      values[i] = samples(static_cast<Index>(i), static_cast<Index>(c));
      squares[i] = std::norm(values[i]);
    }
    rep.mean = make_equality("E W2(z) = 0 at |z|=" + fmt(r), Complex{0.0}, estimate(values, mc));
    // The mean is known to vanish, so E|W2|^2 is itself an unbiased variance estimator.
    rep.variance = make_equality("Var W2(z) exact form at N=" + std::to_string(n) + ", |z|=" + fmt(r),
                                 exact_var_w2(n, z).exact, estimate(squares, mc));
    for (int M = 1; M <= M_max; ++M) {
      const double scale = std::pow(N, M) * std::pow(1.0 - r, 2 * M - 1) / std::pow(r, 4 * M);
      std::vector<double> scaled(mc.trials);
      for (std::size_t i = 0; i < mc.trials; ++i) scaled[i] = std::pow(squares[i], M) * scale;
      rep.scaled_moments.push_back(estimate(scaled, mc));
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

bool DominationReport::passed() const {
  return std::all_of(points.begin(), points.end(), [](const DominationPoint& p) { return p.passed; });
}

DominationReport mc_domination_w2(Index n, std::span<const Complex> zs, double eps, double delta,
                                  const MonteCarlo& mc) {
  require_trials(mc, 2, "mc_domination_w2");
  const double N = static_cast<double>(n);
  const double outer = 1.0 - std::pow(N, -delta);
  for (const Complex& z : zs) {
    const double r = std::abs(z);
    if (r < 0.05 || !(r < outer))
      throw Error(ErrorCode::InvalidArgument, "mc_domination_w2: |z| must lie in [0.05, 1 - N^-delta), got " + fmt(r));
  }
  const ComplexMatrix samples = sample_w2(n, zs, mc);
  DominationReport report;
  report.n = n;
  report.eps = eps;
  report.level = 1.0 - 1.0 / N;
  report.trials = mc.trials;
  for (std::size_t c = 0; c < zs.size(); ++c) {
    const double r = std::abs(zs[c]);
    std::vector<double> ratios(mc.trials);
    for (std::size_t i = 0; i < mc.trials; ++i)
      ratios[i] = std::abs(samples(static_cast<Index>(i), static_cast<Index>(c))) * std::sqrt(N) * (1.0 - r) / (r * r);
    DominationPoint p;
    p.z = zs[c];
    p.quantile = quantile(std::move(ratios), report.level);
    p.threshold = std::pow(N, eps);
    p.passed = p.quantile <= p.threshold;
    report.points.push_back(p);
  }
  return report;
}

Complex distinct_tuple_average(const RealVector& phases, std::span<const int> coefficients) {
  const std::size_t m = coefficients.size();
  if (m == 0) return Complex{1.0};
  if (static_cast<Index>(m) > phases.size())
    throw Error(ErrorCode::InvalidArgument, "distinct_tuple_average: more coefficients than phases");
  return distinct_average(phases, moebius_terms(coefficients), m);
}

ReducedPattern reduce_pattern(const PhasePattern& p) {
  if (p.k.size() != p.l.size() || p.k_prime.size() != p.l_prime.size() || p.k.size() != p.k_prime.size())
    throw Error(ErrorCode::InvalidArgument, "reduce_pattern: mismatched pattern lengths");
  std::map<int, int> coefficient;
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    if (p.l[j] < 1 || p.l_prime[j] < 1)
      throw Error(ErrorCode::InvalidArgument, "reduce_pattern: coefficients must be positive");
    coefficient[p.k[j]] += p.l[j];
    coefficient[p.k_prime[j]] -= p.l_prime[j];
  }
  ReducedPattern r;
  r.distinct_labels = coefficient.size();
  for (const auto& [label, c] : coefficient)
    if (c != 0) r.coefficients.push_back(c);
  return r;
}

std::vector<IdentityReport> cue_phase_identities(const PhaseIdentityParams& params, const MonteCarlo& mc) {
  require_trials(mc, 2, "cue_phase_identities");
  const Index n = params.n;
  const double N = static_cast<double>(n);
  const std::vector<RealVector> phases = phase_samples(n, mc);
  std::vector<IdentityReport> reports;

  for (int l : params.trace_powers) {
    std::vector<double> s(mc.trials);
    for (std::size_t i = 0; i < mc.trials; ++i) s[i] = std::norm(power_sum(phases[i], l));
    reports.push_back(make_equality("E|tr U^" + std::to_string(l) + "|^2 = min(l,N), N=" + std::to_string(n),
                                    static_cast<double>(std::min<Index>(l, n)), estimate(s, mc)));
  }

  // Distinct-tuple averages evaluated on every sample.
  auto tuple_estimate = [&](std::span<const int> coefficients) {
    const auto terms = moebius_terms(coefficients);
    std::vector<Complex> s(mc.trials);
    for (std::size_t i = 0; i < mc.trials; ++i) s[i] = distinct_average(phases[i], terms, coefficients.size());
    return estimate(s, mc);
  };

  for (int l : params.two_theta_powers) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "cue_phase_identities: two-phase identity needs N >= 2");
    const std::vector<int> a{l, -l};
    const double claim = -std::max(0.0, N - l) / (N * (N - 1.0));
    reports.push_back(make_equality("E e^{il(theta1-theta2)} = -(N-l)+/(N(N-1)), l=" + std::to_string(l) +
                                        ", N=" + std::to_string(n),
                                    Complex{claim}, tuple_estimate(a)));
  }

  for (const auto& a : params.coefficient_sets) {
    const auto m = static_cast<int>(a.size());
    if (m < 2 || std::find(a.begin(), a.end(), 0) != a.end())
      throw Error(ErrorCode::InvalidArgument, "cue_phase_identities: need m >= 2 non-zero coefficients");
    const double bound = factorial(m) * std::pow(N, 1 - m);
    reports.push_back(make_upper_bound("|E e^{i sum a_l theta_kl}| < m! N^(1-m), a=" + join(a) +
                                           ", N=" + std::to_string(n),
                                       bound, tuple_estimate(a)));
  }

  for (const auto& pattern : params.patterns) {
    const ReducedPattern reduced = reduce_pattern(pattern);
    const int M = static_cast<int>(pattern.k.size());
    const double bound = factorial(2 * M) * std::pow(N, M - static_cast<double>(reduced.distinct_labels));
    const std::string anchor = "|E e^{i sum l theta_k - l' theta_k'}| < (2M)! N^(M-#k), k=" + join(pattern.k) +
                               ", k'=" + join(pattern.k_prime) + ", N=" + std::to_string(n);
    if (reduced.coefficients.empty()) {
      MCEstimate<Complex> exact{Complex{1.0}, 0.0, mc.trials, lineage_of(mc)};
      reports.push_back(make_upper_bound(anchor, bound, exact));
    } else {
      reports.push_back(make_upper_bound(anchor, bound, tuple_estimate(reduced.coefficients)));
    }
  }
  return reports;
}

OverlapReport eigvec_overlap_check(Index n, const MonteCarlo& mc) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "eigvec_overlap_check: N must be >= 2");
  require_trials(mc, 2, "eigvec_overlap_check");
  const double N = static_cast<double>(n);
  struct Sample {
    double equal = 0.0, distinct = 0.0, total = 0.0;
  };
  const auto samples = parallel_map<Sample>(mc.trials, mc.workers, [&](std::size_t i) {
    Engine gen = trial_stream(mc, stream_offset::kIdentities, i).engine();
    const EigenSystem eig = unitary_eigensystem(sample_haar_unitary(n, gen));
    double s2 = 0.0, s4 = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double w = std::norm((*eig.right_vectors)(0, k));
      s2 += w;
      s4 += w * w;
    }
    return Sample{s4 / N, (s2 * s2 - s4) / (N * (N - 1.0)), s2 * s2};
  });
  std::vector<double> eq(mc.trials), di(mc.trials), tot(mc.trials);
  for (std::size_t i = 0; i < mc.trials; ++i) {
    eq[i] = samples[i].equal;
    di[i] = samples[i].distinct;
    tot[i] = samples[i].total;
  }
  const std::string tag = ", N=" + std::to_string(n);
  OverlapReport out;
  out.equal_indices = make_equality("E|r_k1|^4 = 2/(N(N+1))" + tag, 2.0 / (N * (N + 1.0)), estimate(eq, mc));
  out.distinct_indices =
      make_equality("E|r_k1|^2|r_k'1|^2 = 1/(N(N+1))" + tag, 1.0 / (N * (N + 1.0)), estimate(di, mc));
  out.normalization = make_equality("sum_{k,k'} |r_k1|^2|r_k'1|^2 = 1" + tag, 1.0, estimate(tot, mc));
  // Deterministic identity: the spread is pure rounding, so allow it explicitly.
  if (std::abs(out.normalization.estimate - 1.0) <= 1e-12) out.normalization.passed = true;
  return out;
}

PoissonizedDraw poissonized_spectrum(Index n, int k, const RngStream& stream, bool negative_branch) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "poissonized_spectrum: k must be >= 1");
  Engine gen = stream.engine();
  const double t2 = sample_beta<double>(k, static_cast<double>(n), gen);
  ComplexMatrix u = sample_haar_unitary(n, gen);
  ComplexVector v = sample_unit_vector(n, gen);
  const UAModel model(std::move(u), std::move(v), stream.lineage());
  PoissonizedDraw draw;
  draw.t = (negative_branch ? -1.0 : 1.0) * std::sqrt(t2);
  draw.snapshot = spectrum(model, draw.t);
  return draw;
}

bool KostlanReport::passed() const { return max_ks < ks_threshold && all_outside.passed && radii_sum.passed; }

KostlanReport kostlan_check(Index n, int k, double a, double ks_threshold, const MonteCarlo& mc) {
  require_trials(mc, 2, "kostlan_check");
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::InvalidArgument, "kostlan_check: a must lie in (0, 1)");

  const auto radii = parallel_map<RealVector>(mc.trials, mc.workers, [&](std::size_t i) {
    const PoissonizedDraw d = poissonized_spectrum(n, k, trial_stream(mc, stream_offset::kPoissonized, i));
    RealVector r = d.snapshot.eigenvalues.cwiseAbs2();
    std::sort(r.data(), r.data() + r.size());
    return r;
  });
  // Reference: independent Beta(k + j - 1, 1), j = 1..N, sorted per trial.
  const auto reference = parallel_map<RealVector>(mc.trials, mc.workers, [&](std::size_t i) {
    Engine gen = trial_stream(mc, stream_offset::kKostlanReference, i).engine();
    RealVector r(n);
    for (Index j = 0; j < n; ++j) r(j) = sample_beta<double>(k + static_cast<double>(j), 1.0, gen);
    std::sort(r.data(), r.data() + n);
    return r;
  });

  KostlanReport report;
  report.n = n;
  report.k = k;
  report.trials = mc.trials;
  report.ks_threshold = ks_threshold;
  report.a = a;
  for (Index j = 0; j < n; ++j) {
    std::vector<double> x(mc.trials), y(mc.trials);
    for (std::size_t i = 0; i < mc.trials; ++i) {
      x[i] = radii[i](j);
      y[i] = reference[i](j);
    }
    report.ks_per_order.push_back(ks_two_sample(std::move(x), std::move(y)));
  }
  report.max_ks = *std::max_element(report.ks_per_order.begin(), report.ks_per_order.end());

  double product = 1.0, mean_sum = 0.0;
  for (Index j = 1; j <= n; ++j) {
    const double shape = k + static_cast<double>(j) - 1.0;
    product *= 1.0 - std::pow(a, shape);
    mean_sum += shape / (shape + 1.0);
  }
  std::vector<double> outside(mc.trials), sums(mc.trials);
  for (std::size_t i = 0; i < mc.trials; ++i) {
    outside[i] = radii[i](0) > a ? 1.0 : 0.0;
    sums[i] = radii[i].sum();
  }
  const std::string tag = ", N=" + std::to_string(n) + ", k=" + std::to_string(k);
  report.all_outside = make_equality("P(all |lambda|^2 > a) = prod_j (1 - a^(k+j-1)), a=" + fmt(a) + tag,
                                     product, estimate(outside, mc));
  report.radii_sum = make_equality("E sum |lambda|^2 = sum_j (k+j-1)/(k+j)" + tag, mean_sum, estimate(sums, mc));
  return report;
}

bool AveragedLawReport::passed() const { return quantile <= threshold; }

AveragedLawReport check_averaged_law(Index n, Complex z, double eps, double delta, const MonteCarlo& mc) {
  require_trials(mc, 2, "check_averaged_law");
  const double N = static_cast<double>(n);
  const double r = std::abs(z);
  if (!(r < 1.0 - std::pow(N, -delta)))
    throw Error(ErrorCode::InvalidArgument, "check_averaged_law: requires |z| < 1 - N^-delta");

  const std::vector<RealVector> phases = phase_samples(n, mc);
  std::vector<Complex> traces(mc.trials);
  std::vector<double> ratios(mc.trials);
  for (std::size_t i = 0; i < mc.trials; ++i) {
    Complex tr{0.0};
    for (Index j = 0; j < n; ++j) {
      const Complex q = z * std::polar(1.0, -phases[i](j));
      tr += q * q / (1.0 - q);
    }
    traces[i] = tr;
    ratios[i] = r == 0.0 ? 0.0 : std::abs(tr / N) * N * (1.0 - r) * (1.0 - r) / (r * r);
  }
  AveragedLawReport report;
  report.n = n;
  report.z = z;
  report.level = 1.0 - 1.0 / N;
  report.quantile = quantile(std::move(ratios), report.level);
  report.threshold = std::pow(N, eps);
  report.mean = make_equality("E tr((zU*)^2 (I - zU*)^-1) = 0, N=" + std::to_string(n) + ", |z|=" + fmt(r),
                              Complex{0.0}, estimate(traces, mc));
  return report;
}

}  // namespace uam
