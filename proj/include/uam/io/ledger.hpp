#pragma once

#include "uam/statistics.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace uam::io {

/// One compact JSON object per report: anchor, kind, claimed, estimate, stderr,
/// n_samples, z_score, verdict (and seed lineage when known).
std::string ledger_line(const IdentityReport& report);

/// JSONL: one ledger_line per report, LF-terminated.
std::string ledger_text(std::span<const IdentityReport> reports);
void write_ledger(const std::filesystem::path& path, std::span<const IdentityReport> reports);

}  // namespace uam::io
