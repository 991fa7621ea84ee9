#include "uam/rouche.hpp"

#include "uam/core/errors.hpp"
#include "uam/core/parallel.hpp"
#include "uam/cue_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uam {

std::string to_string(DiskLabel label) {
  switch (label) {
    case DiskLabel::D1: return "D1";
    case DiskLabel::D2: return "D2";
    case DiskLabel::D3: return "D3";
    case DiskLabel::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(Regime regime) {
  return regime == Regime::Subcritical ? "subcritical" : "supercritical";
}

std::size_t DiskSpec::count(const ComplexVector& values) const {
  std::size_t c = 0;
  for (Index j = 0; j < values.size(); ++j) c += contains(values(j)) ? 1 : 0;
  return c;
}

bool rouche_membership(Complex omega1, Complex z_t, double eta, Index n, Complex z) {
  const double r = std::abs(z);
  if (!(r < 1.0)) throw Error(ErrorCode::InvalidArgument, "rouche_membership: requires |z| < 1");
  const double lhs = std::pow(static_cast<double>(n), eta) * r * r / (1.0 - r);
  return lhs < std::abs(omega1) * std::abs(z - z_t);
}

namespace {

template <typename F>
bool all_on_boundary(const DiskSpec& disk, std::size_t samples, F&& predicate) {
  for (std::size_t s = 0; s < samples; ++s) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(samples);
    if (!predicate(disk.center + std::polar(disk.radius, phi))) return false;
  }
  return true;
}

}  // namespace

bool boundary_in_rouche_domain(Complex omega1, Complex z_t, double eta, Index n, const DiskSpec& disk,
                               std::size_t samples) {
  return all_on_boundary(disk, samples, [&](Complex z) {
    return std::abs(z) < 1.0 && rouche_membership(omega1, z_t, eta, n, z);
  });
}

RoucheCertificate rouche_certificate(const UAModel& model, double t, const DiskSpec& disk, std::size_t samples) {
  const double target = 1.0 / (1.0 - t);
  RoucheCertificate cert;
  cert.holds = all_on_boundary(disk, samples, [&](Complex z) {
    if (!(std::abs(z) < 1.0)) return false;
    const ResolventEval r = resolvent_eval(model, z);
    const double ratio = std::abs(r.W2) / std::abs(r.s1 - target);
    cert.worst_ratio = std::max(cert.worst_ratio, ratio);
    return ratio < 1.0;
  });
  cert.predicted = disk.contains(expected_outlier_location(model, t)) ? 1 : 0;
  return cert;
}

DiskFamily theorem_disks(Complex omega1, Index n, double t, double eps) {
  const Complex zt = expected_outlier_location(omega1, n, t);
  const double om = std::abs(omega1);
  const double ne = std::pow(static_cast<double>(n), eps);
  const double azt = std::abs(zt);
  DiskFamily f;
  f.d1 = {zt, azt * azt * ne / om, DiskLabel::D1};
  f.d2 = {0.0, 1.0 / (1.0 + ne / om), DiskLabel::D2};
  f.d3 = {0.0, azt > 0.0 ? 1.0 / (1.0 + ne / (om * azt)) : 0.0, DiskLabel::D3};
  return f;
}

DiskFamily uniform_disks(Complex omega1, Index n, double t, double eps) {
  const Complex zt = expected_outlier_location(omega1, n, t);
  const double ne = std::pow(static_cast<double>(n), eps);
  const double azt = std::abs(zt);
  DiskFamily f;
  f.d1 = {zt, azt * azt * ne, DiskLabel::D1};
  f.d2 = {0.0, 1.0 / ne, DiskLabel::D2};
  f.d3 = {0.0, azt > 0.0 ? std::max(0.0, 1.0 - ne / azt) : 0.0, DiskLabel::D3};
  return f;
}

SeparationReport classify_snapshot(const SpectrumSnapshot& snapshot, const DiskFamily& disks, double delta) {
  const Index n = snapshot.size();
  SeparationReport rep;
  rep.t = snapshot.t;
  rep.lineage = snapshot.lineage;
  rep.counts.inside_d1 = disks.d1.count(snapshot.eigenvalues);
  rep.counts.inside_d2 = disks.d2.count(snapshot.eigenvalues);
  rep.counts.outside_d2 = static_cast<std::size_t>(n) - rep.counts.inside_d2;
  const DiskSpec bulk_cut{disks.d3.center,
                          std::min(disks.d3.radius, 1.0 - std::pow(static_cast<double>(n), -delta)),
                          DiskLabel::Custom};
  rep.counts.inside_d3 = bulk_cut.count(snapshot.eigenvalues);
  rep.subcritical_pass = rep.counts.inside_d1 == 1 && rep.counts.inside_d2 == 1;
  rep.supercritical_pass = rep.counts.inside_d3 == 0;
  return rep;
}

bool supercritical_guard(Complex omega1, Index n, double t) {
  const double root = std::sqrt(static_cast<double>(n));
  return std::abs(omega1) < 0.5 * root && std::abs(t) > 2.0 * std::abs(omega1) / root;
}

bool SweepResult::passed() const {
  return std::all_of(cells.begin(), cells.end(), [&](const SweepCell& c) { return c.pass_fraction >= threshold; });
}

namespace {

// Per-trial outcome of one cell: 1 pass, 0 fail, -1 excluded by the guard.
using Outcomes = std::vector<signed char>;

}  // namespace

SweepResult timescale_sweep(const EnsembleConfig& config, std::span<const double> alphas) {
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "timescale_sweep: trials must be >= 1");
  for (double a : alphas)
    if (!(a > 0.0 && a < 0.5)) throw Error(ErrorCode::InvalidArgument, "timescale_sweep: alpha must lie in (0, 1/2)");

  const double N = static_cast<double>(config.n);
  struct Cell {
    double alpha, t;
    Regime regime;
  };
  std::vector<Cell> cells;
  for (double a : alphas) {
    cells.push_back({a, std::pow(N, -0.5 - a), Regime::Subcritical});
    cells.push_back({a, std::pow(N, -0.5 + a), Regime::Supercritical});
  }

  const RngStream root{config.seed, 0};
  const auto outcomes = parallel_map<Outcomes>(config.trials, config.workers, [&](std::size_t i) {
    const UAModel model = UAModel::sample_cue(config.n, root.trial(stream_offset::kSweep, i));
    const Complex om = omega1(model);
    Outcomes out(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Cell& cell = cells[c];
      const bool omega_scaled = config.scaling == DiskScaling::Omega;
      if (omega_scaled && cell.regime == Regime::Supercritical && !supercritical_guard(om, config.n, cell.t)) {
        out[c] = -1;
        continue;
      }
      const DiskFamily disks = omega_scaled ? theorem_disks(om, config.n, cell.t, config.eps)
                                            : uniform_disks(om, config.n, cell.t, config.eps);
      const SeparationReport rep = classify_snapshot(spectrum(model, cell.t), disks, config.delta);
      const bool pass = cell.regime == Regime::Subcritical ? rep.subcritical_pass : rep.supercritical_pass;
      out[c] = pass ? 1 : 0;
    }
    return out;
  });

  SweepResult result;
  result.threshold = config.threshold;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepCell sc;
    sc.alpha = cells[c].alpha;
    sc.t = cells[c].t;
    sc.regime = cells[c].regime;
    sc.n = config.n;
    for (const Outcomes& o : outcomes) {
      if (o[c] < 0) {
        ++sc.excluded;
        continue;
      }
      ++sc.trials;
      sc.passes += static_cast<std::size_t>(o[c]);
    }
    sc.pass_fraction = sc.trials ? static_cast<double>(sc.passes) / static_cast<double>(sc.trials) : 0.0;
    sc.ci = wilson_interval(sc.passes, sc.trials);
    result.cells.push_back(sc);
  }
  return result;
}

std::vector<CriticalCell> critical_window_stats(const CriticalConfig& config) {
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "critical_window_stats: trials must be >= 1");
  if (!(config.a > 0.0 && config.b > 0.0 && config.a < 1.0 && config.b < 1.0))
    throw Error(ErrorCode::InvalidArgument, "critical_window_stats: radii a, b must lie in (0, 1)");

  const double root = std::sqrt(static_cast<double>(config.n));
  std::vector<double> mus;
  if (config.poissonized) {
    mus.push_back(0.0);
  } else {
    for (double mu : config.mu_grid) {
      if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "critical_window_stats: mu must be > 0");
      if (!(mu / root < 1.0)) throw Error(ErrorCode::InvalidArgument, "critical_window_stats: mu N^-1/2 must be < 1");
      mus.push_back(mu);
    }
  }

  const RngStream base{config.seed, 0};
  struct Sample {
    std::vector<std::size_t> inside_b;  // per cell
    std::vector<char> empty_a;
  };
  const auto samples = parallel_map<Sample>(config.trials, config.workers, [&](std::size_t i) {
    Sample s;
    const RngStream stream = base.trial(stream_offset::kCritical, i);
    std::vector<ComplexVector> spectra;
    if (config.poissonized) {
      spectra.push_back(poissonized_spectrum(config.n, config.k, stream).snapshot.eigenvalues);
    } else {
      const UAModel model = UAModel::sample_cue(config.n, stream);
      for (double mu : mus) spectra.push_back(spectrum(model, mu / root).eigenvalues);
    }
    for (const ComplexVector& ev : spectra) {
      const RealVector mod = ev.cwiseAbs();
      s.inside_b.push_back(static_cast<std::size_t>((mod.array() < config.b).count()));
      s.empty_a.push_back((mod.array() < config.a).any() ? 0 : 1);
    }
    return s;
  });

  std::vector<CriticalCell> cells;
  for (std::size_t c = 0; c < mus.size(); ++c) {
    CriticalCell cell;
    cell.mu = mus[c];
    cell.t = config.poissonized ? std::numeric_limits<double>::quiet_NaN() : mus[c] / root;
    cell.trials = config.trials;
    cell.count_histogram.assign(static_cast<std::size_t>(config.n) + 1, 0);
    for (const Sample& s : samples) {
      ++cell.count_histogram[s.inside_b[c]];
      cell.at_least_two += s.inside_b[c] >= 2 ? 1 : 0;
      cell.empty_a += s.empty_a[c] ? 1 : 0;
    }
    const double n = static_cast<double>(cell.trials);
    cell.at_least_two_fraction = static_cast<double>(cell.at_least_two) / n;
    cell.empty_a_fraction = static_cast<double>(cell.empty_a) / n;
    cell.at_least_two_ci = wilson_interval(cell.at_least_two, cell.trials);
    cell.empty_a_ci = wilson_interval(cell.empty_a, cell.trials);
    cells.push_back(std::move(cell));
  }
  return cells;
}

double poissonized_empty_probability(Index n, double a2) {
  double p = 1.0;
  for (Index j = 1; j <= n; ++j) p *= 1.0 - std::pow(a2, static_cast<double>(j));
  return p;
}

double poissonized_two_inside_probability(double b) { return std::pow(b, 6); }

}  // namespace uam
