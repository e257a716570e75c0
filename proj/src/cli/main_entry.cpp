#include <CLI11.hpp>

#include <cstdio>
#include <optional>

#include "nct/cli.hpp"

namespace nct::cli {

namespace {

// Flag values are kept optional so that only flags given on the command line
// override the config file.
struct Flags {
  std::optional<std::string> config;
  std::optional<int> n;
  std::optional<double> s;
  std::optional<double> a;
  std::optional<int> samples;
  std::optional<int> radius;
  std::optional<double> decay;
  std::optional<double> amplitude;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> theta;
  std::optional<std::string> theta_file;
  std::optional<std::uint64_t> theta_seed;
  std::optional<int> box_margin;
  std::optional<double> positivity_margin;
  std::optional<std::string> out;
  std::optional<std::string> run_name;
  std::optional<double> tol;
  std::optional<double> embedding_constant;
  std::optional<double> safety_factor;
  std::optional<int> l;
  std::optional<int> restarts;
  std::optional<int> budget;
  std::optional<std::string> objective;
  std::optional<std::vector<double>> a_grid;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--n", f.n, "torus dimension");
  sub->add_option("--s", f.s, "Sobolev order, 0 < s < n/2");
  sub->add_option("--a", f.a, "log-Sobolev parameter a > 0");
  sub->add_option("--samples", f.samples, "number of samples");
  sub->add_option("--radius", f.radius, "coefficient radius of samples (or of h for extremal)");
  sub->add_option("--decay", f.decay, "coefficient decay exponent");
  sub->add_option("--amplitude", f.amplitude, "scale of the non-constant part");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--theta", f.theta, "zero | random | file");
  sub->add_option("--theta-file", f.theta_file, "JSON matrix for --theta file");
  sub->add_option("--theta-seed", f.theta_seed, "seed for --theta random (defaults to --seed)");
  sub->add_option("--box-margin", f.box_margin, "truncation box radius minus coefficient radius");
  sub->add_option("--positivity-margin", f.positivity_margin, "admission margin for the spectrum");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--run-name", f.run_name, "run directory name instead of <command>-<timestamp>");
  sub->add_option("--tol", f.tol, "relative tolerance for identities and inequalities");
  sub->add_option("--workers", f.workers, "worker threads (0 = hardware concurrency)");
}

void apply_flags(RunConfig& c, const Flags& f) {
  if (f.n) c.n = *f.n;
  if (f.s) c.s = *f.s;
  if (f.a) c.a = *f.a;
  if (f.samples) c.samples = *f.samples;
  if (f.radius) c.radius = *f.radius;
  if (f.decay) c.decay = *f.decay;
  if (f.amplitude) c.amplitude = *f.amplitude;
  if (f.seed) c.seed = *f.seed;
  if (f.theta) c.theta = *f.theta;
  if (f.theta_file) c.theta_file = *f.theta_file;
  if (f.theta_seed) c.theta_seed = *f.theta_seed;
  if (f.box_margin) c.box_margin = *f.box_margin;
  if (f.positivity_margin) c.positivity_margin = *f.positivity_margin;
  if (f.out) c.out = *f.out;
  if (f.run_name) c.run_name = *f.run_name;
  if (f.tol) c.tol_identity = c.tol_inequality = *f.tol;
  if (f.embedding_constant) c.embedding_constant = *f.embedding_constant;
  if (f.safety_factor) c.safety_factor = *f.safety_factor;
  if (f.l) c.l = *f.l;
  if (f.restarts) c.restarts = *f.restarts;
  if (f.budget) c.budget = *f.budget;
  if (f.objective) c.objective = *f.objective;
  if (f.a_grid) c.a_grid = *f.a_grid;
  if (f.workers) c.workers = *f.workers;
}

void report(const RunResult& r) {
  if (r.exit_code == kConfigError) return;
  std::printf("%s: exit %d, results in %s\n", r.summary.value("command", "run").c_str(), r.exit_code,
              r.directory.string().c_str());
  if (r.summary.contains("violations")) {
    std::printf("violations: %d\n", r.summary["violations"].get<int>());
  }
}

}  // namespace

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Numerical experiments for log-Sobolev inequalities on noncommutative tori"};
  app.require_subcommand(1);
  Flags f;
  auto* verify = app.add_subcommand("verify", "check every step of the log-Sobolev chain on random samples");
  auto* embed = app.add_subcommand("embed", "estimate the Sobolev embedding constant");
  auto* extremal = app.add_subcommand("extremal", "search for large log-Sobolev ratios");
  auto* ks = app.add_subcommand("ks", "check the special-form inequality on the two-torus");
  for (auto* sub : {verify, embed, extremal, ks}) add_common(sub, f);
  verify->add_option("--embedding-constant", f.embedding_constant, "fixed embedding constant");
  verify->add_option("--safety-factor", f.safety_factor, "inflation of the run embedding constant");
  ks->add_option("--l", f.l, "nonzero slope of the one-parameter family");
  extremal->add_option("--restarts", f.restarts, "number of restarts");
  extremal->add_option("--budget", f.budget, "iterations per restart");
  extremal->add_option("--objective", f.objective, "theorem_ratio | combined_slack_ratio");
  extremal->add_option("--a-grid", f.a_grid, "values of a for the sweep table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  RunConfig config;
  try {
    if (f.config) config = load_config_file(*f.config);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  }
  for (auto* sub : {verify, embed, extremal, ks}) {
    if (sub->parsed()) config.command = parse_command(sub->get_name());
  }
  apply_flags(config, f);
  const RunResult r = run(config);
  report(r);
  return r.exit_code;
}

}  // namespace nct::cli
