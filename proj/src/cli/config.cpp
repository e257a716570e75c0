#include <cmath>
#include <fstream>
#include <sstream>

#include "nct/cli.hpp"

namespace nct::cli {

namespace {

const char* const kThetaModes[] = {"zero", "random", "file", "matrix"};

std::vector<double> flatten_matrix(const nlohmann::json& m, const char* what) {
  if (!m.is_array()) throw UsageError(std::string(what) + ": expected an array of rows");
  std::vector<double> out;
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != m.size()) {
      throw UsageError(std::string(what) + ": matrix must be square");
    }
    for (const auto& v : row) out.push_back(v.get<double>());
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::kVerify: return "verify";
    case Command::kEmbed: return "embed";
    case Command::kExtremal: return "extremal";
    case Command::kKs: return "ks";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  if (name == "verify") return Command::kVerify;
  if (name == "embed") return Command::kEmbed;
  if (name == "extremal") return Command::kExtremal;
  if (name == "ks") return Command::kKs;
  throw UsageError("unknown command '" + name + "'");
}

void RunConfig::validate() const {
  require(n >= 2 && n <= kMaxDim, "n must lie in [2, " + std::to_string(kMaxDim) + "]");
  require(std::isfinite(s) && s > 0.0 && 2.0 * s < n, "need 0 < s < n/2");
  require(std::isfinite(a) && a > 0.0, "need a > 0");
  require(samples >= 0, "samples must be >= 0");
  require(radius >= 0, "radius must be >= 0");
  require(std::isfinite(decay), "decay must be finite");
  require(std::isfinite(amplitude) && amplitude >= 0.0, "amplitude must be >= 0");
  require(std::isfinite(shift_lo) && std::isfinite(shift_hi) && 0.0 <= shift_lo && shift_lo <= shift_hi,
          "need 0 <= shift_lo <= shift_hi");
  require(std::isfinite(floor) && floor > 0.0, "floor must be > 0");
  require(box_margin >= -1, "box_margin must be >= 0 (or -1 for the default policy)");
  require(std::isfinite(positivity_margin) && positivity_margin >= 0.0, "positivity margin must be >= 0");
  require(max_attempts >= 1, "max_attempts must be >= 1");
  require(std::isfinite(tol_identity) && tol_identity > 0.0, "identity tolerance must be > 0");
  require(std::isfinite(tol_inequality) && tol_inequality > 0.0, "inequality tolerance must be > 0");
  require(!embedding_constant || (std::isfinite(*embedding_constant) && *embedding_constant >= 1.0),
          "embedding_constant must be >= 1");
  require(std::isfinite(safety_factor) && safety_factor >= 1.0, "safety_factor must be >= 1");
  bool mode_ok = false;
  for (const char* m : kThetaModes) mode_ok = mode_ok || theta == m;
  require(mode_ok, "theta must be zero, random, file or matrix");
  require(theta != "file" || !theta_file.empty(), "theta = file needs theta_file");
  require(theta != "matrix" || theta_matrix.size() == static_cast<std::size_t>(n * n),
          "theta matrix must be n x n");
  require(objective == "theorem_ratio" || objective == "combined_slack_ratio",
          "objective must be theorem_ratio or combined_slack_ratio");
  for (double v : a_grid) require(std::isfinite(v) && v > 0.0, "a_grid values must be > 0");
  require(!out.empty(), "output directory must be set");
  if (command == Command::kKs) {
    require(n == 2, "ks requires n = 2");
    require(l != 0, "ks requires l != 0");
  }
  if (command == Command::kExtremal) {
    require(restarts >= 1, "restarts must be >= 1");
    require(budget >= 1, "budget must be >= 1");
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command_name(command);
  j["n"] = n;
  j["theta"] = theta;
  if (!theta_file.empty()) j["theta_file"] = theta_file;
  if (!theta_matrix.empty()) j["theta_matrix"] = theta_matrix;
  j["theta_seed"] = theta_seed.value_or(seed);
  j["s"] = s;
  j["a"] = a;
  j["samples"] = samples;
  j["radius"] = radius;
  j["decay"] = decay;
  j["amplitude"] = amplitude;
  j["shift_lo"] = shift_lo;
  j["shift_hi"] = shift_hi;
  j["floor"] = floor;
  j["box_margin"] = box_margin;
  j["positivity_margin"] = positivity_margin;
  j["max_attempts"] = max_attempts;
  j["seed"] = seed;
  j["tol"] = {{"identity", tol_identity}, {"inequality", tol_inequality}};
  if (embedding_constant) j["embedding_constant"] = *embedding_constant;
  j["safety_factor"] = safety_factor;
  j["l"] = l;
  j["restarts"] = restarts;
  j["budget"] = budget;
  j["objective"] = objective;
  j["a_grid"] = a_grid;
  j["out"] = out;
  if (!run_name.empty()) j["run_name"] = run_name;
  j["workers"] = workers;
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = parse_command(v.get<std::string>());
      else if (key == "n") c.n = v.get<int>();
      else if (key == "theta") {
        if (v.is_string()) {
          c.theta = v.get<std::string>();
        } else {
          c.theta = "matrix";
          c.theta_matrix = flatten_matrix(v, "theta");
        }
      } else if (key == "theta_file") c.theta_file = v.get<std::string>();
      else if (key == "theta_matrix") c.theta_matrix = v.get<std::vector<double>>();
      else if (key == "theta_seed") c.theta_seed = v.get<std::uint64_t>();
      else if (key == "s") c.s = v.get<double>();
      else if (key == "a") c.a = v.get<double>();
      else if (key == "samples") c.samples = v.get<int>();
      else if (key == "radius") c.radius = v.get<int>();
      else if (key == "decay") c.decay = v.get<double>();
      else if (key == "amplitude") c.amplitude = v.get<double>();
      else if (key == "shift_lo") c.shift_lo = v.get<double>();
      else if (key == "shift_hi") c.shift_hi = v.get<double>();
      else if (key == "floor") c.floor = v.get<double>();
      else if (key == "box_margin") c.box_margin = v.get<int>();
      else if (key == "positivity_margin") c.positivity_margin = v.get<double>();
      else if (key == "max_attempts") c.max_attempts = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "tol") {
        if (v.is_number()) {
          c.tol_identity = c.tol_inequality = v.get<double>();
        } else {
          for (const auto& [tk, tv] : v.items()) {
            if (tk == "identity") c.tol_identity = tv.get<double>();
            else if (tk == "inequality") c.tol_inequality = tv.get<double>();
            else throw UsageError("config: unknown tolerance '" + tk + "'");
          }
        }
      } else if (key == "embedding_constant") c.embedding_constant = v.get<double>();
      else if (key == "safety_factor") c.safety_factor = v.get<double>();
      else if (key == "l") c.l = v.get<int>();
      else if (key == "restarts") c.restarts = v.get<int>();
      else if (key == "budget") c.budget = v.get<int>();
      else if (key == "objective") c.objective = v.get<std::string>();
      else if (key == "a_grid") c.a_grid = v.get<std::vector<double>>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "run_name") c.run_name = v.get<std::string>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else throw UsageError("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path.string() + ": " + e.what());
  }
  RunConfig c;
  apply_json(c, j);
  return c;
}

std::shared_ptr<const Theta> resolve_theta(const RunConfig& c) {
  if (c.theta == "zero") return std::make_shared<const Theta>(Theta::zero(c.n));
  if (c.theta == "random") {
    return std::make_shared<const Theta>(Theta::random(c.n, c.theta_seed.value_or(c.seed)));
  }
  if (c.theta == "matrix") return std::make_shared<const Theta>(Theta(c.n, c.theta_matrix));
  if (c.theta == "file") {
    std::ifstream in(c.theta_file);
    if (!in) throw UsageError("cannot open theta file " + c.theta_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("theta file: " + std::string(e.what()));
    }
    const nlohmann::json& m = j.is_object() ? j.at("theta") : j;
    std::vector<double> entries = flatten_matrix(m, "theta file");
    if (entries.size() != static_cast<std::size_t>(c.n * c.n)) {
      throw UsageError("theta file: matrix size does not match n");
    }
    return std::make_shared<const Theta>(Theta(c.n, std::move(entries)));
  }
  throw UsageError("unknown theta mode " + c.theta);
}

}  // namespace nct::cli
