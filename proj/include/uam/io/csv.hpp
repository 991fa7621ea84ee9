#pragma once

#include "uam/model.hpp"
#include "uam/rouche.hpp"
#include "uam/trajectories.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uam::io {

enum class CsvSchema { Spectra, Trajectories, Sweep, Critical, OdeCompare, Kostlan };

std::string_view schema_name(CsvSchema schema);
const std::vector<std::string>& schema_columns(CsvSchema schema);

/// Cells are kept as text so integers (seeds) survive unchanged; numbers written
/// by the helpers below use 17 significant digits.
struct CsvTable {
  CsvSchema schema = CsvSchema::Spectra;
  std::vector<std::vector<std::string>> rows;

  double number(std::size_t row, std::string_view column) const;
};

std::string format_number(double x);
std::string format_number(std::uint64_t x);
std::string format_number(std::int64_t x);

/// Header + rows, LF line endings. Throws SchemaMismatch for a row of the wrong
/// width and IoError when the file cannot be written.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);

/// Parses a file written by write_csv; the header must match `schema` exactly.
CsvTable read_csv(const std::filesystem::path& path, CsvSchema schema);

struct SpectrumRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  const SpectrumSnapshot* snapshot = nullptr;
};

CsvTable spectra_table(std::span<const SpectrumRecord> records);
/// One row per (path, t), path-major.
CsvTable trajectories_table(const TrajectoryBundle& bundle);
/// Rebuilds a bundle (t grid and paths) from a trajectories table.
TrajectoryBundle bundle_from_table(const CsvTable& table);
CsvTable sweep_table(const SweepResult& result);
CsvTable critical_table(std::span<const CriticalCell> cells, Index n);

}  // namespace uam::io
