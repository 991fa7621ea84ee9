#include "uam/io/ledger.hpp"

#include "uam/core/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace uam::io {
namespace {

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::ordered_json complex_json(Complex z) {
  if (z.imag() == 0.0) return number_or_null(z.real());
  return nlohmann::ordered_json{{"re", number_or_null(z.real())}, {"im", number_or_null(z.imag())}};
}

}  // namespace

std::string ledger_line(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["anchor"] = r.anchor;
  j["kind"] = r.kind == ClaimKind::Equality ? "equality" : "upper_bound";
  j["claimed"] = complex_json(r.claimed);
  j["estimate"] = complex_json(r.estimate);
  j["stderr"] = number_or_null(r.std_error);
  j["n_samples"] = r.n_samples;
  j["z_score"] = number_or_null(r.z_score);
  j["verdict"] = r.passed ? "pass" : "fail";
  if (r.lineage) j["seed"] = r.lineage->seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

std::string ledger_text(std::span<const IdentityReport> reports) {
  std::string out;
  for (const IdentityReport& r : reports) {
    out += ledger_line(r);
    out += '\n';
  }
  return out;
}

void write_ledger(const std::filesystem::path& path, std::span<const IdentityReport> reports) {
  const std::string text = ledger_text(reports);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace uam::io
