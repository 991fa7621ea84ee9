#include "uam/io/csv.hpp"

#include "uam/core/errors.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace uam::io {
namespace {

const std::map<CsvSchema, std::vector<std::string>>& column_table() {
  static const std::map<CsvSchema, std::vector<std::string>> table{
      {CsvSchema::Spectra, {"trial", "seed", "t", "index", "re", "im"}},
      {CsvSchema::Trajectories, {"path", "t", "re", "im"}},
      {CsvSchema::Sweep, {"alpha", "t", "N", "trials", "pass_fraction", "ci_low", "ci_high"}},
      {CsvSchema::Critical,
       {"mu", "t", "N", "trials", "at_least_two_fraction", "at_least_two_ci_low", "at_least_two_ci_high",
        "empty_fraction", "empty_ci_low", "empty_ci_high"}},
      {CsvSchema::OdeCompare, {"trial", "path", "t", "track_re", "track_im", "ode_re", "ode_im", "deviation"}},
      {CsvSchema::Kostlan, {"order", "ks_distance"}},
  };
  return table;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

}  // namespace

std::string_view schema_name(CsvSchema schema) {
  switch (schema) {
    case CsvSchema::Spectra: return "spectra";
    case CsvSchema::Trajectories: return "trajectories";
    case CsvSchema::Sweep: return "sweep";
    case CsvSchema::Critical: return "critical";
    case CsvSchema::OdeCompare: return "ode_compare";
    case CsvSchema::Kostlan: return "kostlan";
  }
  return "unknown";
}

const std::vector<std::string>& schema_columns(CsvSchema schema) { return column_table().at(schema); }

double CsvTable::number(std::size_t row, std::string_view column) const {
  const auto& cols = schema_columns(schema);
  const auto it = std::find(cols.begin(), cols.end(), column);
  if (it == cols.end())
    throw Error(ErrorCode::SchemaMismatch, "no column '" + std::string(column) + "' in " + std::string(schema_name(schema)));
  const std::string& cell = rows.at(row).at(static_cast<std::size_t>(it - cols.begin()));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty())
    throw Error(ErrorCode::SchemaMismatch, "cell '" + cell + "' in column " + std::string(column) + " is not a number");
  return v;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_number(std::uint64_t x) { return std::to_string(x); }
std::string format_number(std::int64_t x) { return std::to_string(x); }

std::string to_csv_string(const CsvTable& table) {
  const auto& cols = schema_columns(table.schema);
  std::string out = join(cols) + '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != cols.size())
      throw Error(ErrorCode::SchemaMismatch, "row " + std::to_string(r) + " has " +
                                                 std::to_string(table.rows[r].size()) + " cells, schema " +
                                                 std::string(schema_name(table.schema)) + " has " +
                                                 std::to_string(cols.size()));
    out += join(table.rows[r]);
    out += '\n';
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  const std::string text = to_csv_string(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path, CsvSchema schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, path.string() + " is empty");
  const auto& cols = schema_columns(schema);
  if (split(line) != cols)
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": header does not match schema " +
                                               std::string(schema_name(schema)));
  CsvTable table;
  table.schema = schema;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != cols.size())
      throw Error(ErrorCode::SchemaMismatch, path.string() + ": row " + std::to_string(table.rows.size() + 1) +
                                                 " has the wrong number of cells");
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable spectra_table(std::span<const SpectrumRecord> records) {
  CsvTable table{CsvSchema::Spectra, {}};
  for (const SpectrumRecord& rec : records) {
    const SpectrumSnapshot& s = *rec.snapshot;
    for (Index j = 0; j < s.size(); ++j) {
      table.rows.push_back({format_number(rec.trial), format_number(rec.seed), format_number(s.t),
                            format_number(static_cast<std::int64_t>(j)), format_number(s.eigenvalues(j).real()),
                            format_number(s.eigenvalues(j).imag())});
    }
  }
  return table;
}

CsvTable trajectories_table(const TrajectoryBundle& bundle) {
  CsvTable table{CsvSchema::Trajectories, {}};
  for (Index p = 0; p < bundle.path_count(); ++p) {
    for (std::size_t i = 0; i < bundle.t.size(); ++i) {
      const Complex z = bundle.paths(p, static_cast<Index>(i));
      table.rows.push_back({format_number(static_cast<std::int64_t>(p)), format_number(bundle.t[i]),
                            format_number(z.real()), format_number(z.imag())});
    }
  }
  return table;
}

TrajectoryBundle bundle_from_table(const CsvTable& table) {
  if (table.schema != CsvSchema::Trajectories)
    throw Error(ErrorCode::SchemaMismatch, "bundle_from_table: not a trajectories table");
  if (table.rows.empty()) throw Error(ErrorCode::SchemaMismatch, "bundle_from_table: no rows");
  std::map<long long, std::vector<std::pair<double, Complex>>> paths;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto p = static_cast<long long>(table.number(r, "path"));
    paths[p].emplace_back(table.number(r, "t"), Complex(table.number(r, "re"), table.number(r, "im")));
  }
  const std::size_t steps = paths.begin()->second.size();
  TrajectoryBundle bundle;
  bundle.paths.resize(static_cast<Index>(paths.size()), static_cast<Index>(steps));
  Index row = 0;
  for (const auto& [id, points] : paths) {
    if (points.size() != steps)
      throw Error(ErrorCode::SchemaMismatch, "bundle_from_table: paths have different lengths");
    for (std::size_t i = 0; i < steps; ++i) {
      if (row == 0) {
        bundle.t.push_back(points[i].first);
        bundle.requested.push_back(1);
      } else if (points[i].first != bundle.t[i]) {
        throw Error(ErrorCode::SchemaMismatch, "bundle_from_table: paths use different t grids");
      }
      bundle.paths(row, static_cast<Index>(i)) = points[i].second;
    }
    ++row;
  }
  return bundle;
}

CsvTable sweep_table(const SweepResult& result) {
  CsvTable table{CsvSchema::Sweep, {}};
  for (const SweepCell& c : result.cells) {
    table.rows.push_back({format_number(c.alpha), format_number(c.t), format_number(static_cast<std::int64_t>(c.n)),
                          format_number(static_cast<std::uint64_t>(c.trials)), format_number(c.pass_fraction),
                          format_number(c.ci.low), format_number(c.ci.high)});
  }
  return table;
}

CsvTable critical_table(std::span<const CriticalCell> cells, Index n) {
  CsvTable table{CsvSchema::Critical, {}};
  for (const CriticalCell& c : cells) {
    table.rows.push_back({format_number(c.mu), format_number(c.t), format_number(static_cast<std::int64_t>(n)),
                          format_number(static_cast<std::uint64_t>(c.trials)), format_number(c.at_least_two_fraction),
                          format_number(c.at_least_two_ci.low), format_number(c.at_least_two_ci.high),
                          format_number(c.empty_a_fraction), format_number(c.empty_a_ci.low),
                          format_number(c.empty_a_ci.high)});
  }
  return table;
}

}  // namespace uam::io
