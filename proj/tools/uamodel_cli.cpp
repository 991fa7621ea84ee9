// Command-line front end: run / validate experiment configs, render trajectory CSVs.
#include "uam/core/errors.hpp"
#include "uam/experiments/config.hpp"
#include "uam/experiments/run.hpp"
#include "uam/io/csv.hpp"
#include "uam/io/svg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int exit_code_for(const uam::Error& e) {
  if (e.code() == uam::ErrorCode::ConfigInvalid) return 2;
  if (e.is_numerical()) return 3;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-one multiplicative perturbations of Haar unitaries: experiments and plots"};
  app.set_version_flag("--version", std::string(uam::experiments::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config and print its canonical form");
  validate->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string csv_path, svg_path;
  auto* plot = app.add_subcommand("plot", "Render a trajectories CSV as SVG");
  plot->add_option("csv", csv_path, "Trajectories CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", svg_path, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      const auto manifest = uam::experiments::run(uam::experiments::load_config(config_path));
      std::cout << manifest.output_dir.string() << "\n";
      for (const auto& f : manifest.outputs) std::cout << "  " << f.sha256 << "  " << f.name << "\n";
    } else if (*validate) {
      std::cout << uam::experiments::canonical_json(uam::experiments::load_config(validate_path)) << "\n";
    } else if (*plot) {
      const auto table = uam::io::read_csv(csv_path, uam::io::CsvSchema::Trajectories);
      std::ofstream out(svg_path, std::ios::trunc);
      out << uam::io::emit_trajectory_svg(uam::io::bundle_from_table(table));
      if (!out) throw uam::Error(uam::ErrorCode::IoError, "cannot write " + svg_path);
    }
  } catch (const uam::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
