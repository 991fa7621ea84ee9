#pragma once

#include "uam/core/types.hpp"
#include "uam/rouche.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uam::experiments {

enum class ExperimentKind { Trajectories, OdeCompare, Sweep, Critical, Identities, Poissonized };

std::string to_string(ExperimentKind kind);

enum class GridType { Linear, Geometric };

struct GridSpec {
  GridType type = GridType::Linear;
  double from = 1.0;
  double to = 0.0;
  std::size_t count = 2;

  std::vector<double> values() const;
};

/// Validated experiment description. Field names mirror the JSON keys.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Trajectories;
  Index n = 100;                // "N"
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 0;         // 0: hardware concurrency; never changes results
  GridSpec t_grid;
  std::vector<double> alpha_grid{0.1, 0.2, 0.3};
  std::vector<double> mu_grid{1.0};
  double epsilon = 0.1;
  double delta = 0.6;
  double threshold = 0.9;
  DiskScaling scaling = DiskScaling::Uniform;
  double a = 0.2;               // critical: empty-disk radius; poissonized: squared-radius level
  double b = 0.9;               // critical: counting-disk radius
  bool poissonized = false;     // critical: random t with t^2 ~ Beta(k, N)
  int k = 1;
  double max_displacement = 0.05;
  int max_depth = 20;
  double rtol = 1e-9;
  double atol = 1e-12;
  std::filesystem::path output_dir;  // relative paths resolve against the output root
};

/// Parses and validates a JSON document. Every problem is reported in one
/// ConfigInvalid error, one "field: reason" per line. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (all fields, fixed key order) of a validated config.
std::string canonical_json(const ExperimentConfig& config);

/// UA_OUTPUT_ROOT if set, else the current directory.
std::filesystem::path output_root();
std::filesystem::path resolved_output_dir(const ExperimentConfig& config);

}  // namespace uam::experiments
