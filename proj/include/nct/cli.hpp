#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nct/logsobolev.hpp"

namespace nct::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSummarySchema = 1;

enum ExitCode : int { kClean = 0, kViolation = 1, kConfigError = 2 };

enum class Command { kVerify, kEmbed, kExtremal, kKs };
const char* command_name(Command c);
Command parse_command(const std::string& name);

/// Every knob of a run. Loaded from a JSON object (keys as below) and then
/// overridden by command-line flags.
struct RunConfig {
  Command command = Command::kVerify;
  int n = 2;
  std::string theta = "random";  // zero | random | file | matrix
  std::string theta_file;
  std::vector<double> theta_matrix;  // row-major, for theta = matrix
  std::optional<std::uint64_t> theta_seed;  // defaults to seed
  double s = 0.5;
  double a = 0.36787944117144233;  // 1/e
  int samples = 100;
  int radius = 2;
  double decay = 2.0;
  double amplitude = 1.0;
  double shift_lo = 0.6;
  double shift_hi = 1.5;
  double floor = 0.05;
  int box_margin = -1;  // box radius = radius + margin; -1 selects the default policy
  double positivity_margin = kDefaultPositivityMargin;
  int max_attempts = 50;
  std::uint64_t seed = 0;
  double tol_identity = 1e-8;
  double tol_inequality = 1e-8;
  std::optional<double> embedding_constant;  // verify: else the run supremum
  double safety_factor = 1.0;
  int l = 1;
  int restarts = 20;
  int budget = 20;
  std::string objective = "theorem_ratio";
  std::vector<double> a_grid;
  std::string out = "runs";
  std::string run_name;  // replaces <command>-<timestamp> when set
  unsigned workers = 1;

  /// Throws UsageError on any inconsistency.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Applies the keys of a JSON object; unknown keys are an error.
void apply_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path);

std::shared_ptr<const Theta> resolve_theta(const RunConfig& config);

struct RunResult {
  int exit_code = kClean;
  std::filesystem::path directory;
  nlohmann::json summary;
};

RunResult cmd_verify(const RunConfig& config);
RunResult cmd_embed(const RunConfig& config);
RunResult cmd_extremal(const RunConfig& config);
RunResult cmd_ks(const RunConfig& config);
/// Validates and dispatches on config.command; config errors become exit 2.
RunResult run(const RunConfig& config);

/// Full command line handling (argv[1] is the subcommand).
int main_entry(int argc, const char* const* argv);

}  // namespace nct::cli
