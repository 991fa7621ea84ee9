#pragma once

#include "uam/experiments/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace uam::experiments {

inline constexpr const char* kToolVersion = "uamodel 1.0.0";

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct OutputFile {
  std::string name;    // relative to the output directory
  std::string sha256;  // lowercase hex
  std::uintmax_t bytes = 0;
};

/// What a run produced. Everything except the timings is a pure function of the
/// config, so reruns reproduce the inventory and digests exactly.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string config_json;
  double wall_seconds = 0.0;
  std::vector<StageTiming> stages;
  std::vector<OutputFile> outputs;
  std::filesystem::path output_dir;

  std::string to_json() const;
};

/// Executes the configured experiment. Files are written into a sibling temporary
/// directory that replaces `output_dir` only once everything, including
/// manifest.json (written last), is complete. On failure the temporary directory
/// is removed and the error is rethrown.
RunManifest run(const ExperimentConfig& config);

/// Lowercase hex SHA-256 of a byte string / file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace uam::experiments
