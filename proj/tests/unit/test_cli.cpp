#include "uam/core/errors.hpp"
#include "uam/experiments/config.hpp"
#include "uam/experiments/run.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace uam;
using namespace uam::experiments;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
  const fs::path p = fs::temp_directory_path() / "uam-unit-cli";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(UAM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = sandbox() / name;
  std::ofstream(p) << body;
  return p;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config defaults and canonical form") {
  const ExperimentConfig c = parse_config(R"({"experiment": "trajectories", "N": 30, "seed": 4})");
  CHECK(c.n == 30);
  CHECK(c.trials == 1);
  CHECK(c.t_grid.values().front() == 1.0);
  CHECK(c.output_dir == fs::path("trajectories-N30-seed4"));
  const ExperimentConfig again = parse_config(canonical_json(c));
  CHECK(canonical_json(again) == canonical_json(c));
}

TEST_CASE("config rejects out-of-domain fields by name") {
  const std::string e = config_error(R"({"experiment": "sweep", "N": 0, "trials": 0, "alpha_grid": [0.7], "colour": 1})");
  CHECK(e.find("N:") != std::string::npos);
  CHECK(e.find("trials:") != std::string::npos);
  CHECK(e.find("alpha_grid") != std::string::npos);
  CHECK(e.find("colour") != std::string::npos);
  CHECK(config_error(R"({"experiment": "nonsense"})").find("experiment") != std::string::npos);
  CHECK(config_error(R"({"experiment": "trajectories", "t_grid": {"type": "linear", "from": 0.5, "to": 0.1, "count": 5}})")
            .find("t_grid") != std::string::npos);
  CHECK(config_error(R"({"experiment": "critical", "N": 100, "mu_grid": [20]})").find("mu_grid") != std::string::npos);
  CHECK(config_error("{not json").find("ConfigInvalid") != std::string::npos);
}

TEST_CASE("run writes outputs and a manifest whose digests match") {
  ExperimentConfig c = parse_config(R"({"experiment": "trajectories", "N": 6, "trials": 2, "seed": 3})");
  c.output_dir = sandbox() / "manifest-check";
  const RunManifest m = run(c);
  CHECK(fs::exists(m.output_dir / "manifest.json"));
  CHECK(m.outputs.size() == 5);
  for (const OutputFile& f : m.outputs) {
    CHECK(sha256_file(m.output_dir / f.name) == f.sha256);
    CHECK(fs::file_size(m.output_dir / f.name) == f.bytes);
  }
  CHECK_FALSE(fs::exists(sandbox() / ".manifest-check.partial"));
  const auto j = nlohmann::json::parse(slurp(m.output_dir / "manifest.json"));
  CHECK(j["config"]["N"] == 6);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("CLI determinism: reruns and worker counts give identical bytes") {
  const fs::path root = sandbox() / "determinism";
  fs::remove_all(root);
  const std::string base = R"("experiment": "sweep", "N": 30, "trials": 20, "seed": 11, "alpha_grid": [0.1, 0.3])";
  const fs::path one = write_config("det1.json", "{" + base + R"(, "workers": 1, "output_dir": ")" + (root / "a").string() + "\"}");
  const fs::path many = write_config("det2.json", "{" + base + R"(, "workers": 4, "output_dir": ")" + (root / "b").string() + "\"}");
  REQUIRE(cli("run " + one.string()) == 0);
  REQUIRE(cli("run " + many.string()) == 0);
  CHECK(slurp(root / "a" / "sweep.csv") == slurp(root / "b" / "sweep.csv"));
  CHECK(slurp(root / "a" / "summary.json") == slurp(root / "b" / "summary.json"));
  const std::string first = slurp(root / "a" / "sweep.csv");
  REQUIRE(cli("run " + one.string()) == 0);
  CHECK(slurp(root / "a" / "sweep.csv") == first);
  CHECK(first.rfind("alpha,t,N,trials,pass_fraction,ci_low,ci_high\n", 0) == 0);
}

TEST_CASE("CLI exit codes and plot") {
  CHECK(cli("validate " + write_config("bad.json", R"({"experiment": "sweep", "N": -3})").string()) == 2);
  CHECK(cli("validate " + write_config("good.json", R"({"experiment": "identities", "N": 10, "trials": 200})").string()) == 0);
  CHECK(cli("frobnicate") != 0);

  const fs::path out = sandbox() / "plot-run";
  const fs::path cfg = write_config("plot.json", R"({"experiment": "trajectories", "N": 4, "seed": 2, "output_dir": ")" +
                                                     out.string() + "\"}");
  REQUIRE(cli("run " + cfg.string()) == 0);
  const fs::path svg = sandbox() / "replot.svg";
  CHECK(cli("plot " + (out / "trajectories_000.csv").string() + " -o " + svg.string()) == 0);
  CHECK(slurp(svg) == slurp(out / "trajectories_000.svg"));
  CHECK(cli("plot " + (out / "summary.json").string() + " -o " + svg.string()) == 1);
}

TEST_CASE("output root comes from the environment") {
  const fs::path root = sandbox() / "root-env";
  ::setenv("UA_OUTPUT_ROOT", root.c_str(), 1);
  const ExperimentConfig c = parse_config(R"({"experiment": "critical", "N": 20, "seed": 1})");
  CHECK(resolved_output_dir(c) == root / "critical-N20-seed1");
  ::unsetenv("UA_OUTPUT_ROOT");
}
