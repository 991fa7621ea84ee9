#include "uam/core/errors.hpp"
#include "uam/io/csv.hpp"
#include "uam/io/ledger.hpp"
#include "uam/io/svg.hpp"
#include "uam/trajectories.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <regex>

using namespace uam;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "uam-unit-io";
  fs::create_directories(p);
  return p / name;
}

}  // namespace

TEST_CASE("spectra CSV: header plus one row per eigenvalue") {
  const UAModel m = UAModel::sample_cue(2, RngStream{1, 0});
  const SpectrumSnapshot s = spectrum(m, 0.4);
  const io::SpectrumRecord rec{0, 1, &s};
  const io::CsvTable t = io::spectra_table({&rec, 1});
  CHECK(t.rows.size() == 2);
  const std::string text = io::to_csv_string(t);
  CHECK(text.rfind("trial,seed,t,index,re,im\n", 0) == 0);
}

TEST_CASE("CSV round trip preserves doubles exactly") {
  const UAModel m = UAModel::sample_cue(7, RngStream{2, 0});
  const TrajectoryBundle b = track(m, linear_grid(1.0, -0.5, 12));
  const fs::path path = scratch("traj.csv");
  io::write_csv(path, io::trajectories_table(b));
  const TrajectoryBundle back = io::bundle_from_table(io::read_csv(path, io::CsvSchema::Trajectories));
  CHECK(back.t == b.t);
  CHECK(back.paths == b.paths);
  CHECK(io::format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV schema errors") {
  io::CsvTable t{io::CsvSchema::Sweep, {{"1", "2"}}};
  CHECK_THROWS_AS(io::to_csv_string(t), Error);
  const fs::path path = scratch("kostlan.csv");
  io::write_csv(path, io::CsvTable{io::CsvSchema::Kostlan, {{"1", "0.01"}}});
  CHECK_THROWS_AS(io::read_csv(path, io::CsvSchema::Sweep), Error);
  CHECK_THROWS_AS(io::read_csv(scratch("missing.csv"), io::CsvSchema::Sweep), Error);
}

TEST_CASE("SVG: viewport, unit circle, one group per path") {
  const UAModel m = UAModel::sample_cue(5, RngStream{3, 0});
  const std::string svg = io::emit_trajectory_svg(track(m, linear_grid(1.0, -0.9, 30)));
  CHECK(svg.find("<svg") != std::string::npos);
  // Square 800 px viewport spanning [-1.5, 1.5]: the unit circle has radius 800 / 3.
  CHECK(svg.find("viewBox=\"0 0 800 800\"") != std::string::npos);
  std::smatch r;
  REQUIRE(std::regex_search(svg, r, std::regex("class=\"unit-circle\"[^>]* r=\"([0-9.]+)\"")));
  CHECK(std::stod(r[1]) == doctest::Approx(800.0 / 3.0).epsilon(1e-4));
  const std::regex group("<g class=\"path\"");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), group), std::sregex_iterator()) == 5);
  CHECK(svg.find("</svg>") != std::string::npos);

  const UAModel one = UAModel::sample_cue(1, RngStream{4, 0});
  const std::string single = io::emit_trajectory_svg(track(one, linear_grid(1.0, 0.1, 5)));
  CHECK(std::distance(std::sregex_iterator(single.begin(), single.end(), group), std::sregex_iterator()) == 1);
}

TEST_CASE("ledger line carries the verdict fields") {
  const IdentityReport r = make_equality("E X = 1", 1.0, MCEstimate<double>{1.05, 0.02, 400, Lineage{9, 0}});
  const auto j = nlohmann::json::parse(io::ledger_line(r));
  CHECK(j["anchor"] == "E X = 1");
  CHECK(j["verdict"] == "pass");
  CHECK(j["n_samples"] == 400);
  CHECK(j["seed"] == 9);
  const auto c = nlohmann::json::parse(io::ledger_line(make_equality("c", Complex(0, 1), MCEstimate<Complex>{Complex(0, 1), 0.1, 10, {}})));
  CHECK(c["estimate"]["im"] == 1.0);
}
