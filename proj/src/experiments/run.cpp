#include "uam/experiments/run.hpp"

#include "uam/core/errors.hpp"
#include "uam/core/parallel.hpp"
#include "uam/cue_stats.hpp"
#include "uam/hypergeometric.hpp"
#include "uam/io/csv.hpp"
#include "uam/io/ledger.hpp"
#include "uam/io/svg.hpp"
#include "uam/rouche.hpp"
#include "uam/trajectories.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uam::experiments {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

class OutputSink {
 public:
  explicit OutputSink(fs::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir_ / name).string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + (dir_ / name).string());
    files_.push_back({name, sha256_hex(content), content.size()});
  }

  void csv(const std::string& name, const io::CsvTable& table) { text(name, io::to_csv_string(table)); }
  void json(const std::string& name, const ordered_json& j) { text(name, j.dump(2) + "\n"); }
  void ledger(const std::string& name, const std::vector<IdentityReport>& r) { text(name, io::ledger_text(r)); }

  const std::vector<OutputFile>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

class Stopwatch {
 public:
  explicit Stopwatch(std::vector<StageTiming>& stages) : stages_(stages), last_(Clock::now()) {}
  void lap(std::string name) {
    const auto now = Clock::now();
    stages_.push_back({std::move(name), std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& stages_;
  Clock::time_point last_;
};

std::string trial_name(const std::string& stem, std::size_t trial, const std::string& ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.%s", stem.c_str(), trial, ext.c_str());
  return buf;
}

TrackOptions track_options(const ExperimentConfig& c) {
  TrackOptions o;
  o.max_displacement = c.max_displacement;
  o.max_depth = c.max_depth;
  return o;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

ordered_json report_json(const IdentityReport& r) { return ordered_json::parse(io::ledger_line(r)); }

void run_trajectories(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  const std::vector<double> grid = c.t_grid.values();
  const RngStream root{c.seed, 0};
  const auto bundles = parallel_map<TrajectoryBundle>(c.trials, c.workers, [&](std::size_t i) {
    const UAModel model = UAModel::sample_cue(c.n, root.trial(stream_offset::kTrajectories, i));
    return track(model, grid, track_options(c));
  });
  watch.lap("track");
  ordered_json summary = ordered_json::array();
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const TrajectoryBundle& b = bundles[i];
    sink.csv(trial_name("trajectories", i, "csv"), io::trajectories_table(b));
    sink.text(trial_name("trajectories", i, "svg"), io::emit_trajectory_svg(b));
    double det_defect = 0.0, min_gap = INFINITY;
    for (std::size_t k = 0; k < b.t.size(); ++k) {
      const ComplexVector col = b.paths.col(static_cast<Index>(k));
      det_defect = std::max(det_defect, std::abs(std::abs(col.prod()) - std::abs(b.t[k])));
      min_gap = std::min(min_gap, min_pairwise_distance(col));
    }
    summary.push_back({{"trial", i},
                       {"grid_points", b.t.size()},
                       {"refinements", b.refinements},
                       {"ambiguous_steps", b.ambiguous_steps.size()},
                       {"max_determinant_defect", det_defect},
                       {"min_pairwise_distance", min_gap}});
  }
  sink.json("summary.json", {{"experiment", "trajectories"}, {"trials", summary}});
  watch.lap("write");
}

void run_ode_compare(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  const std::vector<double> grid = c.t_grid.values();
  const RngStream root{c.seed, 0};
  OdeOptions ode;
  ode.rtol = c.rtol;
  ode.atol = c.atol;
  struct Pair {
    TrajectoryBundle tracked, integrated;
    OdeStats stats;
  };
  const auto pairs = parallel_map<Pair>(c.trials, c.workers, [&](std::size_t i) {
    const UAModel model = UAModel::sample_cue(c.n, root.trial(stream_offset::kOdeCompare, i));
    Pair p;
    p.tracked = track(model, grid, track_options(c)).requested_only();
    p.integrated = integrate_ode(model, grid, ode, &p.stats);
    return p;
  });
  watch.lap("integrate");
  io::CsvTable table{io::CsvSchema::OdeCompare, {}};
  ordered_json summary = ordered_json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Pair& p = pairs[i];
    for (Index path = 0; path < p.tracked.path_count(); ++path) {
      for (std::size_t k = 0; k < p.tracked.t.size(); ++k) {
        const Complex a = p.tracked.paths(path, static_cast<Index>(k));
        const Complex b = p.integrated.paths(path, static_cast<Index>(k));
        table.rows.push_back({io::format_number(static_cast<std::uint64_t>(i)),
                              io::format_number(static_cast<std::int64_t>(path)), io::format_number(p.tracked.t[k]),
                              io::format_number(a.real()), io::format_number(a.imag()), io::format_number(b.real()),
                              io::format_number(b.imag()), io::format_number(std::abs(a - b))});
      }
    }
    const double dev = max_deviation(p.tracked, p.integrated);
    worst = std::max(worst, dev);
    summary.push_back({{"trial", i},
                       {"max_deviation", dev},
                       {"accepted_steps", p.stats.accepted},
                       {"rejected_steps", p.stats.rejected},
                       {"collision_rejections", p.stats.collision_rejections}});
  }
  sink.csv("ode_compare.csv", table);
  sink.json("summary.json", {{"experiment", "ode-compare"}, {"ode_sign", kOdeSign}, {"max_deviation", worst},
                             {"trials", summary}});
  watch.lap("write");
}

void run_sweep(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  EnsembleConfig e;
  e.n = c.n;
  e.eps = c.epsilon;
  e.delta = c.delta;
  e.threshold = c.threshold;
  e.trials = c.trials;
  e.seed = c.seed;
  e.workers = c.workers;
  e.scaling = c.scaling;
  const SweepResult result = timescale_sweep(e, c.alpha_grid);
  watch.lap("sweep");
  sink.csv("sweep.csv", io::sweep_table(result));
  ordered_json cells = ordered_json::array();
  for (const SweepCell& cell : result.cells) {
    cells.push_back({{"alpha", cell.alpha},
                     {"t", cell.t},
                     {"regime", to_string(cell.regime)},
                     {"trials", cell.trials},
                     {"excluded", cell.excluded},
                     {"pass_fraction", cell.pass_fraction},
                     {"meets_threshold", cell.pass_fraction >= c.threshold}});
  }
  sink.json("summary.json", {{"experiment", "sweep"}, {"threshold", c.threshold}, {"cells", cells}});
  watch.lap("write");
}

void run_critical(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  CriticalConfig cc;
  cc.n = c.n;
  cc.mu_grid = c.mu_grid;
  cc.trials = c.trials;
  cc.a = c.a;
  cc.b = c.b;
  cc.poissonized = c.poissonized;
  cc.k = c.k;
  cc.seed = c.seed;
  cc.workers = c.workers;
  const std::vector<CriticalCell> cells = critical_window_stats(cc);
  watch.lap("critical");
  sink.csv("critical.csv", io::critical_table(cells, c.n));
  ordered_json out = ordered_json::array();
  for (const CriticalCell& cell : cells) {
    std::vector<std::size_t> hist = cell.count_histogram;
    while (hist.size() > 1 && hist.back() == 0) hist.pop_back();
    out.push_back({{"mu", cell.mu},
                   {"at_least_two_fraction", cell.at_least_two_fraction},
                   {"empty_a_fraction", cell.empty_a_fraction},
                   {"count_histogram", hist}});
  }
  ordered_json summary{{"experiment", "critical"}, {"a", c.a}, {"b", c.b}, {"cells", out}};
  if (c.poissonized && c.k == 1)
    summary["two_inside_lower_bound_b6"] = poissonized_two_inside_probability(c.b);
  sink.json("summary.json", summary);
  watch.lap("write");
}

void run_identities(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  const MonteCarlo mc{c.trials, c.seed, c.workers};
  const Index n = c.n;
  std::vector<IdentityReport> reports;

  const std::vector<Complex> zs{0.3, 0.5, 0.8};
  for (const W2MomentReport& m : mc_w2_moments(n, zs, 2, mc)) {
    reports.push_back(m.mean);
    reports.push_back(m.variance);
    const VarianceW2 v = exact_var_w2(n, m.z);
    reports.push_back(make_exact("Var W2 strictly between x^2/((N+1)(1-x)) and twice that, |z|=" +
                                     short_number(std::abs(m.z)),
                                 1.0, v.strictly_between ? 1.0 : 0.0, 0.0));
    reports.push_back(make_exact("Var W2 two exact forms agree, |z|=" + short_number(std::abs(m.z)), v.exact,
                                 v.alternate, 1e-14 * v.exact));
  }
  watch.lap("w2");

  PhaseIdentityParams params;
  params.n = n;
  params.trace_powers = {1, 5, static_cast<int>(n), static_cast<int>(n) + 10};
  params.two_theta_powers = {1, static_cast<int>(n / 2)};
  params.coefficient_sets = {{1, -1}, {1, -2, 1}, {2, -1, -1}};
  params.patterns = {PhasePattern{{0}, {1}, {1}, {1}}, PhasePattern{{0, 1}, {1, 2}, {1, 2}, {2, 1}}};
  for (IdentityReport& r : cue_phase_identities(params, mc)) reports.push_back(std::move(r));
  watch.lap("phases");

  const OverlapReport overlap = eigvec_overlap_check(n, mc);
  reports.push_back(overlap.equal_indices);
  reports.push_back(overlap.distinct_indices);
  reports.push_back(overlap.normalization);
  reports.push_back(check_averaged_law(n, 0.5, c.epsilon, c.delta, mc).mean);
  watch.lap("overlaps");

  reports.push_back(make_exact("2F1(3,3;1;0.4) = (1-x)^-5 2F1(-2,-2;1;0.4)", hyp2f1(3, 3, 1, 0.4),
                               hyp2f1_euler(3, 3, 1, 0.4), 1e-12 * hyp2f1(3, 3, 1, 0.4)));
  const PartitionSumReport ps = partition_sum_identity(2, 0.3, 60);
  reports.push_back(make_exact("sum_L binom(L+1,1)^2 0.3^L = 2F1(2,2;1;0.3)", ps.hypergeometric, ps.binomial_series,
                               ps.tail_bound + 1e-10));
  sink.ledger("ledger.jsonl", reports);

  std::size_t passed = 0;
  for (const IdentityReport& r : reports) passed += r.passed ? 1 : 0;
  sink.json("summary.json", {{"experiment", "identities"}, {"claims", reports.size()}, {"passed", passed}});
  watch.lap("write");
}

void run_poissonized(const ExperimentConfig& c, OutputSink& sink, Stopwatch& watch) {
  const MonteCarlo mc{c.trials, c.seed, c.workers};
  const KostlanReport k = kostlan_check(c.n, c.k, c.a, 0.05, mc);
  watch.lap("kostlan");
  io::CsvTable table{io::CsvSchema::Kostlan, {}};
  for (std::size_t j = 0; j < k.ks_per_order.size(); ++j)
    table.rows.push_back({io::format_number(static_cast<std::uint64_t>(j + 1)), io::format_number(k.ks_per_order[j])});
  sink.csv("kostlan.csv", table);
  std::vector<IdentityReport> reports{k.all_outside, k.radii_sum};
  reports.push_back(make_upper_bound("max KS distance of squared-radius order statistics vs independent betas",
                                     k.ks_threshold, MCEstimate<double>{k.max_ks, 0.0, k.trials, Lineage{c.seed, 0}}));
  sink.ledger("ledger.jsonl", reports);
  sink.json("summary.json", {{"experiment", "poissonized"},
                             {"max_ks", k.max_ks},
                             {"ks_threshold", k.ks_threshold},
                             {"all_outside", report_json(k.all_outside)},
                             {"radii_sum", report_json(k.radii_sum)}});
  watch.lap("write");
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return sha256_hex(s.str());
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["tool_version"] = tool_version;
  j["config"] = ordered_json::parse(config_json);
  ordered_json files = ordered_json::array();
  for (const OutputFile& f : outputs) files.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  j["outputs"] = files;
  ordered_json timing = ordered_json::array();
  for (const StageTiming& s : stages) timing.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  j["stages"] = timing;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config) {
  const auto start = Clock::now();
  RunManifest manifest;
  manifest.config_json = canonical_json(config);
  manifest.output_dir = resolved_output_dir(config);

  const fs::path final_dir = manifest.output_dir;
  const fs::path parent = final_dir.has_parent_path() ? final_dir.parent_path() : fs::current_path();
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + parent.string() + ": " + ec.message());
  const fs::path staging = parent / ("." + final_dir.filename().string() + ".partial");
  fs::remove_all(staging, ec);
  if (!fs::create_directory(staging, ec) || ec)
    throw Error(ErrorCode::IoError, "cannot create " + staging.string());

  try {
    OutputSink sink(staging);
    Stopwatch watch(manifest.stages);
    switch (config.experiment) {
      case ExperimentKind::Trajectories: run_trajectories(config, sink, watch); break;
      case ExperimentKind::OdeCompare: run_ode_compare(config, sink, watch); break;
      case ExperimentKind::Sweep: run_sweep(config, sink, watch); break;
      case ExperimentKind::Critical: run_critical(config, sink, watch); break;
      case ExperimentKind::Identities: run_identities(config, sink, watch); break;
      case ExperimentKind::Poissonized: run_poissonized(config, sink, watch); break;
    }
    manifest.outputs = sink.files();
    manifest.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    {
      const std::string text = manifest.to_json();
      std::ofstream out(staging / "manifest.json", std::ios::binary | std::ios::trunc);
      out.write(text.data(), static_cast<std::streamsize>(text.size()));
      if (!out) throw Error(ErrorCode::IoError, "cannot write manifest");
    }
    fs::remove_all(final_dir);
    fs::rename(staging, final_dir);
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return manifest;
}

}  // namespace uam::experiments
