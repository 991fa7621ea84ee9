#pragma once

#include "uam/model.hpp"
#include "uam/statistics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uam {

enum class DiskLabel { D1, D2, D3, Custom };
std::string to_string(DiskLabel label);

/// Closed disk D(center, radius).
struct DiskSpec {
  Complex center{};
  double radius = 0.0;
  DiskLabel label = DiskLabel::Custom;

  bool contains(Complex z) const { return std::abs(z - center) <= radius; }
  std::size_t count(const ComplexVector& values) const;
};

/// Strict inequality N^eta |z|^2 / (1 - |z|) < |omega_1| |z - z_t|; |z| < 1 required.
bool rouche_membership(Complex omega1, Complex z_t, double eta, Index n, Complex z);

/// True when `samples` equispaced points of the disk boundary all lie in the domain above.
bool boundary_in_rouche_domain(Complex omega1, Complex z_t, double eta, Index n, const DiskSpec& disk,
                               std::size_t samples = 360);

/// Rouche comparison of W - 1/(1-t) with s_1 - 1/(1-t) on a disk boundary for one model:
/// `holds` when |W_2| < |s_1 - 1/(1-t)| at every sampled boundary point; then the disk holds
/// exactly `predicted` eigenvalues (1 when z_t is inside, else 0).
struct RoucheCertificate {
  bool holds = false;
  std::size_t predicted = 0;
  double worst_ratio = 0.0;  // max |W_2| / |s_1 - 1/(1-t)| over the boundary
};
RoucheCertificate rouche_certificate(const UAModel& model, double t, const DiskSpec& disk,
                                     std::size_t samples = 360);

struct DiskFamily {
  DiskSpec d1, d2, d3;
};

/// Disks scaled by |omega_1|:
///   D1 = D(z_t, |z_t|^2 N^eps / |omega_1|), D2 = D(0, (1 + N^eps/|omega_1|)^-1),
///   D3 = D(0, (1 + N^eps / (|omega_1| |z_t|))^-1).
/// Throws DegenerateOmega, InvalidArgument for t = 1.
DiskFamily theorem_disks(Complex omega1, Index n, double t, double eps);

/// The omega-free versions: D(z_t, |z_t|^2 N^eps), D(0, N^-eps), D(0, max(0, 1 - N^eps / |z_t|)).
DiskFamily uniform_disks(Complex omega1, Index n, double t, double eps);

enum class DiskScaling { Uniform, Omega };

struct SeparationCounts {
  std::size_t inside_d1 = 0;
  std::size_t inside_d2 = 0;
  std::size_t outside_d2 = 0;
  std::size_t inside_d3 = 0;  // inside D3 and inside D(0, 1 - N^-delta)
};

struct SeparationReport {
  double t = 0.0;
  SeparationCounts counts;
  bool subcritical_pass = false;    // one eigenvalue in D1 and one in D2
  bool supercritical_pass = false;  // no eigenvalue in D3 within D(0, 1 - N^-delta)
  std::optional<Lineage> lineage;
};

SeparationReport classify_snapshot(const SpectrumSnapshot& snapshot, const DiskFamily& disks, double delta);

/// Guard of the omega-scaled supercritical clause: |omega_1| < sqrt(N)/2 and |t| > 2 |omega_1| / sqrt(N).
bool supercritical_guard(Complex omega1, Index n, double t);

struct EnsembleConfig {
  Index n = 100;
  double eps = 0.1;
  double delta = 0.6;
  double threshold = 0.9;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  DiskScaling scaling = DiskScaling::Uniform;
};

enum class Regime { Subcritical, Supercritical };
std::string to_string(Regime regime);

struct SweepCell {
  double alpha = 0.0;
  double t = 0.0;
  Regime regime = Regime::Subcritical;
  Index n = 0;
  std::size_t trials = 0;    // counted trials (guard exclusions removed)
  std::size_t excluded = 0;  // trials failing the supercritical guard (omega scaling only)
  std::size_t passes = 0;
  double pass_fraction = 0.0;
  Interval ci;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  double threshold = 0.0;
  bool passed() const;  // every cell at or above threshold
};

/// For each alpha in (0, 1/2): t = N^{-1/2-alpha} (subcritical clause) and
/// t = N^{-1/2+alpha} (supercritical clause), on the same fresh model per trial.
SweepResult timescale_sweep(const EnsembleConfig& config, std::span<const double> alphas);

struct CriticalConfig {
  Index n = 100;
  std::vector<double> mu_grid{1.0};
  std::size_t trials = 200;
  double a = 0.2;  // empty-disk radius
  double b = 0.9;  // counting-disk radius
  bool poissonized = false;
  int k = 1;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

struct CriticalCell {
  double mu = 0.0;  // 0 for the Poissonized cell
  double t = 0.0;   // fixed time, or NaN when t is random
  std::size_t trials = 0;
  std::vector<std::size_t> count_histogram;  // [m] = trials with m eigenvalues in D(0, b)
  std::size_t at_least_two = 0;
  std::size_t empty_a = 0;
  double at_least_two_fraction = 0.0;
  double empty_a_fraction = 0.0;
  Interval at_least_two_ci;
  Interval empty_a_ci;
};

/// At t = mu N^{-1/2} (or t^2 ~ Beta(k, N) when poissonized): distribution of the
/// number of eigenvalues in D(0, b) and frequency of an empty D(0, a).
std::vector<CriticalCell> critical_window_stats(const CriticalConfig& config);

/// Poissonized k = 1 closed forms: P(every squared radius > a2) = prod_{j=1}^N (1 - a2^j),
/// and P(two smallest squared radii < b^2) = b^6.
double poissonized_empty_probability(Index n, double a2);
double poissonized_two_inside_probability(double b);

}  // namespace uam
