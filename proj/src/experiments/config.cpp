#include "uam/experiments/config.hpp"

#include "uam/core/errors.hpp"
#include "uam/trajectories.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace uam::experiments {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "experiment", "N",       "trials",      "seed", "workers", "t_grid",           "alpha_grid",
      "mu_grid",    "epsilon", "delta",       "threshold", "scaling", "a",          "b",
      "poissonized", "k",      "max_displacement", "max_depth", "rtol", "atol", "output_dir"};
  return keys;
}

class Validator {
 public:
  explicit Validator(const json& doc) : doc_(doc) {}

  void fail(const std::string& field, const std::string& reason) { problems_.push_back(field + ": " + reason); }

  bool has(const char* key) const { return doc_.contains(key); }

  template <typename Int>
  void integer(const char* key, Int& out, long long min, long long max) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number_integer()) return fail(key, "must be an integer");
    if (v.is_number_unsigned()) {
      const auto u = v.get<unsigned long long>();
      if (min > 0 && u < static_cast<unsigned long long>(min)) return fail(key, "must be >= " + std::to_string(min));
      if (max >= 0 && u > static_cast<unsigned long long>(max))
        return fail(key, "must be <= " + std::to_string(max));
      out = static_cast<Int>(u);
      return;
    }
    const auto x = v.get<long long>();
    if (x < min) return fail(key, "must be >= " + std::to_string(min));
    if (max >= 0 && x > max) return fail(key, "must be <= " + std::to_string(max));
    out = static_cast<Int>(x);
  }

  void seed(const char* key, std::uint64_t& out) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer()) {
      fail(key, "must be a non-negative integer");
    } else {
      fail(key, "must be an integer");
    }
  }

  // Reads a number; `check` returns an empty string when the value is acceptable.
  template <typename Check>
  void number(const char* key, double& out, Check&& check) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number()) return fail(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) return fail(key, "must be finite");
    const std::string why = check(x);
    if (!why.empty()) return fail(key, why);
    out = x;
  }

  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_boolean()) return fail(key, "must be true or false");
    out = v.get<bool>();
  }

  void number_list(const char* key, std::vector<double>& out) {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_array()) return fail(key, "must be an array of numbers");
    std::vector<double> xs;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) return fail(std::string(key) + "[" + std::to_string(i) + "]", "must be a number");
      xs.push_back(v[i].get<double>());
    }
    out = std::move(xs);
  }

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  const json& doc_;
  std::vector<std::string> problems_;
};

std::string positive(double x) { return x > 0.0 ? "" : "must be > 0"; }
std::string unit_open(double x) { return x > 0.0 && x < 1.0 ? "" : "must lie in (0, 1)"; }

ExperimentKind parse_kind(const std::string& s, bool& ok) {
  ok = true;
  if (s == "trajectories") return ExperimentKind::Trajectories;
  if (s == "ode-compare") return ExperimentKind::OdeCompare;
  if (s == "sweep") return ExperimentKind::Sweep;
  if (s == "critical") return ExperimentKind::Critical;
  if (s == "identities") return ExperimentKind::Identities;
  if (s == "poissonized") return ExperimentKind::Poissonized;
  ok = false;
  return ExperimentKind::Trajectories;
}

GridSpec default_grid(ExperimentKind kind) {
  if (kind == ExperimentKind::OdeCompare) return {GridType::Linear, 1.0, 0.2, 33};
  return {GridType::Linear, 1.0, -0.99, 200};
}

void parse_grid(const json& doc, Validator& v, GridSpec& grid) {
  if (!doc.contains("t_grid")) return;
  const json& g = doc.at("t_grid");
  if (!g.is_object()) return v.fail("t_grid", "must be an object with type, from, to, count");
  for (const auto& [key, value] : g.items()) {
    if (key != "type" && key != "from" && key != "to" && key != "count") v.fail("t_grid." + key, "unknown key");
  }
  if (g.contains("type")) {
    const json& t = g.at("type");
    if (t == "linear") grid.type = GridType::Linear;
    else if (t == "geometric") grid.type = GridType::Geometric;
    else v.fail("t_grid.type", "must be \"linear\" or \"geometric\"");
  }
  Validator inner(g);
  inner.number("from", grid.from, [](double) { return std::string(); });
  inner.number("to", grid.to, [](double) { return std::string(); });
  inner.integer("count", grid.count, 2, 1'000'000);
  for (const std::string& p : inner.problems()) v.fail("t_grid." + p.substr(0, p.find(':')), p.substr(p.find(':') + 2));
}

void check_grid(const ExperimentConfig& c, Validator& v) {
  const GridSpec& g = c.t_grid;
  if (g.type == GridType::Geometric && !(g.from * g.to > 0.0))
    v.fail("t_grid", "geometric grids need non-zero endpoints of equal sign");
  if (g.from == g.to) v.fail("t_grid", "from and to must differ");
  if (c.experiment == ExperimentKind::Trajectories) {
    if (g.from != 1.0) v.fail("t_grid.from", "must be 1 (the anchor of every path)");
    if (!(g.to > -1.0 && g.to < 1.0)) v.fail("t_grid.to", "must lie in (-1, 1)");
  }
  if (c.experiment == ExperimentKind::OdeCompare) {
    if (g.from != 1.0) v.fail("t_grid.from", "must be 1 (the anchor of every path)");
    if (!(g.to > 0.0 && g.to < 1.0)) v.fail("t_grid.to", "must lie in (0, 1)");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Trajectories: return "trajectories";
    case ExperimentKind::OdeCompare: return "ode-compare";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Critical: return "critical";
    case ExperimentKind::Identities: return "identities";
    case ExperimentKind::Poissonized: return "poissonized";
  }
  return "unknown";
}

std::vector<double> GridSpec::values() const {
  return type == GridType::Linear ? linear_grid(from, to, count) : geometric_grid(from, to, count);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, std::string("document: not valid JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigInvalid, "document: must be a JSON object");

  Validator v(doc);
  for (const auto& [key, value] : doc.items())
    if (!known_keys().count(key)) v.fail(key, "unknown key");

  ExperimentConfig c;
  if (!doc.contains("experiment")) {
    v.fail("experiment", "is required");
  } else if (!doc.at("experiment").is_string()) {
    v.fail("experiment", "must be a string");
  } else {
    bool ok = false;
    c.experiment = parse_kind(doc.at("experiment").get<std::string>(), ok);
    if (!ok)
      v.fail("experiment", "must be one of trajectories, ode-compare, sweep, critical, identities, poissonized");
  }
  c.t_grid = default_grid(c.experiment);

  v.integer("N", c.n, 1, 1 << 16);
  v.integer("trials", c.trials, 1, 100'000'000);
  v.seed("seed", c.seed);
  v.integer("workers", c.workers, 0, 4096);
  parse_grid(doc, v, c.t_grid);
  v.number_list("alpha_grid", c.alpha_grid);
  v.number_list("mu_grid", c.mu_grid);
  v.number("epsilon", c.epsilon, positive);
  v.number("delta", c.delta, positive);
  v.number("threshold", c.threshold, [](double x) { return x >= 0.0 && x <= 1.0 ? "" : "must lie in [0, 1]"; });
  if (doc.contains("scaling")) {
    const json& s = doc.at("scaling");
    if (s == "uniform") c.scaling = DiskScaling::Uniform;
    else if (s == "omega") c.scaling = DiskScaling::Omega;
    else v.fail("scaling", "must be \"uniform\" or \"omega\"");
  }
  v.number("a", c.a, unit_open);
  v.number("b", c.b, unit_open);
  v.boolean("poissonized", c.poissonized);
  v.integer("k", c.k, 1, 1'000'000);
  v.number("max_displacement", c.max_displacement, positive);
  v.integer("max_depth", c.max_depth, 0, 60);
  v.number("rtol", c.rtol, positive);
  v.number("atol", c.atol, positive);
  if (doc.contains("output_dir")) {
    const json& o = doc.at("output_dir");
    if (!o.is_string() || o.get<std::string>().empty()) v.fail("output_dir", "must be a non-empty string");
    else c.output_dir = o.get<std::string>();
  }

  // Cross-field rules.
  check_grid(c, v);
  if (c.experiment == ExperimentKind::Sweep) {
    if (c.alpha_grid.empty()) v.fail("alpha_grid", "must not be empty");
    for (std::size_t i = 0; i < c.alpha_grid.size(); ++i)
      if (!(c.alpha_grid[i] > 0.0 && c.alpha_grid[i] < 0.5))
        v.fail("alpha_grid[" + std::to_string(i) + "]", "must lie in (0, 0.5)");
  }
  if (c.experiment == ExperimentKind::Critical && !c.poissonized) {
    if (c.mu_grid.empty()) v.fail("mu_grid", "must not be empty");
    for (std::size_t i = 0; i < c.mu_grid.size(); ++i)
      if (!(c.mu_grid[i] > 0.0 && c.mu_grid[i] < std::sqrt(static_cast<double>(c.n))))
        v.fail("mu_grid[" + std::to_string(i) + "]", "must lie in (0, sqrt(N))");
  }
  if (c.experiment == ExperimentKind::Identities) {
    if (c.n < 3) v.fail("N", "must be >= 3 for the identities suite");
    if (c.trials < 100) v.fail("trials", "must be >= 100 for the identities suite");
  }
  if (c.experiment == ExperimentKind::Poissonized && c.trials < 2) v.fail("trials", "must be >= 2");

  if (!v.problems().empty()) {
    std::string message = "invalid configuration";
    for (const std::string& p : v.problems()) message += "\n  " + p;
    throw Error(ErrorCode::ConfigInvalid, message);
  }
  if (c.output_dir.empty())
    c.output_dir = to_string(c.experiment) + "-N" + std::to_string(c.n) + "-seed" + std::to_string(c.seed);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "document: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(c.experiment);
  j["N"] = c.n;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["t_grid"] = {{"type", c.t_grid.type == GridType::Linear ? "linear" : "geometric"},
                 {"from", c.t_grid.from},
                 {"to", c.t_grid.to},
                 {"count", c.t_grid.count}};
  j["alpha_grid"] = c.alpha_grid;
  j["mu_grid"] = c.mu_grid;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["threshold"] = c.threshold;
  j["scaling"] = c.scaling == DiskScaling::Uniform ? "uniform" : "omega";
  j["a"] = c.a;
  j["b"] = c.b;
  j["poissonized"] = c.poissonized;
  j["k"] = c.k;
  j["max_displacement"] = c.max_displacement;
  j["max_depth"] = c.max_depth;
  j["rtol"] = c.rtol;
  j["atol"] = c.atol;
  j["output_dir"] = c.output_dir.string();
  return j.dump(2);
}

std::filesystem::path output_root() {
  if (const char* root = std::getenv("UA_OUTPUT_ROOT"); root && *root) return root;
  return std::filesystem::current_path();
}

std::filesystem::path resolved_output_dir(const ExperimentConfig& config) {
  if (config.output_dir.is_absolute()) return config.output_dir;
  return output_root() / config.output_dir;
}

}  // namespace uam::experiments
