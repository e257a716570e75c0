#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <optional>

#include "nct/cli.hpp"
#include "nct/extremal.hpp"
#include "nct/parallel.hpp"
#include "nct/random.hpp"

namespace nct::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// <out>/<run_name or command-timestamp>, suffixed -2, -3, ... if taken.
std::filesystem::path make_run_dir(const RunConfig& c, const std::string& stamp) {
  const std::string base = c.run_name.empty() ? std::string(command_name(c.command)) + "-" + stamp
                                              : c.run_name;
  std::filesystem::path dir = std::filesystem::path(c.out) / base;
  for (int k = 2; std::filesystem::exists(dir); ++k) {
    dir = std::filesystem::path(c.out) / (base + "-" + std::to_string(k));
  }
  std::filesystem::create_directories(dir);
  return dir;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

SampleSpec sample_spec(const RunConfig& c) {
  SampleSpec spec;
  spec.radius = c.radius;
  spec.decay = c.decay;
  spec.amplitude = c.amplitude;
  spec.shift_lo = c.shift_lo;
  spec.shift_hi = c.shift_hi;
  spec.floor = c.floor;
  return spec;
}

BoxPolicy box_policy(const RunConfig& c) {
  BoxPolicy p;
  p.radius = c.box_margin < 0 ? -1 : c.radius + c.box_margin;
  return p;
}

ChainTolerances tolerances(const RunConfig& c) { return {c.tol_identity, c.tol_inequality}; }

struct Artifacts {
  std::string stamp = utc_timestamp();
  Clock::time_point start = Clock::now();
  std::filesystem::path dir;
};

Artifacts open_run(const RunConfig& c) {
  Artifacts a;
  a.dir = make_run_dir(c, a.stamp);
  write_json(a.dir / "config.json", c.to_json());
  return a;
}

nlohmann::json base_summary(const RunConfig& c, const Artifacts& a, const Theta& theta) {
  nlohmann::json j;
  j["schema"] = kSummarySchema;
  j["version"] = kVersion;
  j["command"] = command_name(c.command);
  j["key"] = {{"n", c.n}, {"s", c.s}};
  j["seed"] = c.seed;
  j["timestamp"] = a.stamp;
  j["theta"] = theta.entries();
  j["config"] = c.to_json();
  return j;
}

RunResult finish(const Artifacts& a, nlohmann::json summary, int exit_code) {
  summary["wall_time_s"] = std::chrono::duration<double>(Clock::now() - a.start).count();
  summary["exit_code"] = exit_code;
  write_json(a.dir / "summary.json", summary);
  return {exit_code, a.dir, std::move(summary)};
}

struct SlackStats {
  std::size_t rows = 0;
  double min = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  double sum = 0.0;
  int violations = 0;

  void add(double slack, bool violated) {
    ++rows;
    min = std::min(min, slack);
    max_abs = std::max(max_abs, std::abs(slack));
    sum += slack;
    violations += violated ? 1 : 0;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["rows"] = rows;
    j["violations"] = violations;
    if (rows > 0) {
      j["min_slack"] = min;
      j["mean_slack"] = sum / static_cast<double>(rows);
      j["max_abs_slack"] = max_abs;
    }
    return j;
  }
};

}  // namespace

RunResult cmd_verify(const RunConfig& c) {
  c.validate();
  const auto theta = resolve_theta(c);
  const SobolevParams params = SobolevParams::make(c.n, c.s, c.a);
  const SampleSpec spec = sample_spec(c);
  const BoxPolicy boxes = box_policy(c);
  Artifacts art = open_run(c);

  struct Slot {
    std::optional<PositiveSample> sample;
    SpectralMeasure mu;
    int box_radius = 0;
    double ratio_sq = 0.0;
  };
  const auto count = static_cast<std::size_t>(c.samples);
  std::vector<Slot> slots(count);
  parallel_for(count, c.workers, [&](std::size_t i) {
    Slot& slot = slots[i];
    slot.sample = draw_positive(theta, spec, substream_seed(c.seed, i), boxes, c.positivity_margin,
                                c.max_attempts);
    if (!slot.sample) return;
    const TruncationBox box = boxes.box_for(slot.sample->x);
    slot.box_radius = box.radius();
    slot.mu = spectral_measure(slot.sample->x, box);
    const double lp = lp_norm(slot.mu, params.p);
    const double w = sobolev_norm(slot.sample->x, params.s);
    slot.ratio_sq = lp * lp / (w * w);
  });

  double sup_sq = 1.0;
  int failed = 0;
  int rejected = 0;
  for (const Slot& s : slots) {
    if (!s.sample) {
      ++failed;
      rejected += c.max_attempts;
      continue;
    }
    rejected += s.sample->rejected;
    sup_sq = std::max(sup_sq, s.ratio_sq);
  }
  const double chat = c.embedding_constant.value_or(c.safety_factor * sup_sq);
  const LogSobolevConstant constant = build_constant(c.n, c.s, c.a, chat);

  std::vector<std::optional<ProofChainReport>> reports(count);
  parallel_for(count, c.workers, [&](std::size_t i) {
    const Slot& s = slots[i];
    if (s.sample) reports[i] = verify_chain(s.mu, s.sample->x, params, s.box_radius, constant, i);
  });

  const ChainTolerances tol = tolerances(c);
  std::ofstream csv(art.dir / "results.csv");
  csv << "sample,stage,lhs,rhs,slack\n";
  SlackStats stats[5];
  double max_parseval = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& rep : reports) {
    if (!rep) continue;
    max_parseval = std::max(max_parseval, rep->parseval_defect);
    min_eig = std::min(min_eig, rep->min_eigenvalue);
    for (const StageResult& st : rep->stages) {
      const double slack = st.check.relative_slack();
      stats[static_cast<int>(st.stage)].add(slack, violates(st.stage, st.check, tol));
      csv << rep->sample << ',' << stage_name(st.stage) << ',' << fmt(st.check.lhs) << ','
          << fmt(st.check.rhs) << ',' << fmt(slack) << '\n';
    }
  }
  csv.close();

  int violations = 0;
  nlohmann::json stage_json;
  for (int k = 0; k < 5; ++k) {
    stage_json[stage_name(static_cast<Stage>(k))] = stats[k].to_json();
    violations += stats[k].violations;
  }
  nlohmann::json summary = base_summary(c, art, *theta);
  summary["samples"] = {{"requested", c.samples},
                        {"admitted", c.samples - failed},
                        {"failed", failed},
                        {"rejected_candidates", rejected}};
  summary["embedding"] = {{"supremum_ratio", std::sqrt(sup_sq)},
                          {"constant", chat},
                          {"source", c.embedding_constant ? "config" : "run"}};
  summary["constant"] = {{"value", constant.value}, {"additive_term", constant.additive_term}};
  summary["stages"] = stage_json;
  summary["violations"] = violations;
  summary["max_parseval_defect"] = max_parseval;
  if (std::isfinite(min_eig)) summary["min_eigenvalue"] = min_eig;
  return finish(art, std::move(summary), violations > 0 ? kViolation : kClean);
}

RunResult cmd_embed(const RunConfig& c) {
  c.validate();
  const auto theta = resolve_theta(c);
  const SobolevParams params = SobolevParams::make(c.n, c.s, c.a);
  Artifacts art = open_run(c);

  EmbeddingSampler sampler;
  sampler.theta = theta;
  sampler.count = c.samples;
  sampler.spec = sample_spec(c);
  sampler.seed = c.seed;
  sampler.boxes = box_policy(c);
  sampler.margin = c.positivity_margin;
  sampler.max_attempts = c.max_attempts;
  sampler.workers = c.workers;
  const EmbeddingEstimate est = estimate_embedding_constant(params, sampler);

  std::ofstream csv(art.dir / "results.csv");
  csv << "seed,radius,s,p,l2,w2s,lp,ratio\n";
  for (const EmbeddingRow& r : est.rows) {
    csv << r.seed << ',' << r.radius << ',' << fmt(r.s) << ',' << fmt(r.p) << ',' << fmt(r.l2) << ','
        << fmt(r.w2s) << ',' << fmt(r.lp) << ',' << fmt(r.ratio) << '\n';
  }
  csv.close();

  nlohmann::json summary = base_summary(c, art, *theta);
  summary["p"] = params.p;
  summary["samples"] = {{"requested", c.samples},
                        {"admitted", est.rows.size()},
                        {"failed", est.failed},
                        {"rejected_candidates", est.rejected}};
  summary["supremum_ratio"] = est.supremum;
  summary["embedding_constant"] = embedding_constant_from(est);
  return finish(art, std::move(summary), kClean);
}

RunResult cmd_ks(const RunConfig& c) {
  c.validate();
  const auto theta = resolve_theta(c);
  const SampleSpec spec = sample_spec(c);
  const BoxPolicy boxes = box_policy(c);
  Artifacts art = open_run(c);

  struct Row {
    bool ok = false;
    int rejected = 0;
    StageCheck check;
  };
  const auto count = static_cast<std::size_t>(c.samples);
  std::vector<Row> rows(count);
  parallel_for(count, c.workers, [&](std::size_t i) {
    const std::uint64_t seed = substream_seed(c.seed, i);
    for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
      const auto coeffs = one_parameter_candidate(*theta, c.l, spec,
                                                  substream_seed(seed, static_cast<std::uint64_t>(attempt)));
      const NcElement x = one_parameter_element(theta, coeffs, c.l);
      const TruncationBox box = boxes.box_for(x);
      if (!strict_positivity_check(x, box, c.positivity_margin).positive) continue;
      rows[i] = {true, attempt, ks_special_form_check(coeffs, c.l, theta, box)};
      return;
    }
    rows[i].rejected = c.max_attempts;
  });

  std::ofstream csv(art.dir / "results.csv");
  csv << "sample,l,lhs,rhs,slack\n";
  SlackStats stats;
  int failed = 0;
  int rejected = 0;
  for (std::size_t i = 0; i < count; ++i) {
    rejected += rows[i].rejected;
    if (!rows[i].ok) {
      ++failed;
      continue;
    }
    const StageCheck& k = rows[i].check;
    const double slack = k.relative_slack();
    stats.add(slack, !(slack >= -c.tol_inequality));
    csv << i << ',' << c.l << ',' << fmt(k.lhs) << ',' << fmt(k.rhs) << ',' << fmt(slack) << '\n';
  }
  csv.close();

  nlohmann::json summary = base_summary(c, art, *theta);
  summary["l"] = c.l;
  summary["samples"] = {{"requested", c.samples},
                        {"admitted", c.samples - failed},
                        {"failed", failed},
                        {"rejected_candidates", rejected}};
  summary["slack"] = stats.to_json();
  summary["violations"] = stats.violations;
  return finish(art, std::move(summary), stats.violations > 0 ? kViolation : kClean);
}

RunResult cmd_extremal(const RunConfig& c) {
  c.validate();
  const auto theta = resolve_theta(c);
  ObjectiveSpec spec;
  spec.kind = c.objective == "theorem_ratio" ? Objective::kTheoremRatio : Objective::kCombinedSlackRatio;
  spec.params = SobolevParams::make(c.n, c.s, c.a);
  const Parameterization param(theta, c.radius);
  const TruncationBox box(c.n, c.radius + (c.box_margin < 0 ? 3 : c.box_margin));
  if (box.size() > kDefaultMatrixCap) throw UsageError("extremal: truncation box exceeds the matrix cap");
  // a wider box for re-evaluating the best point, kept small enough for a dense solve
  int check_radius = box.radius();
  for (int r = c.radius + 8; r > box.radius(); --r) {
    if (std::pow(2.0 * r + 1.0, c.n) <= 1500.0) {
      check_radius = r;
      break;
    }
  }
  Artifacts art = open_run(c);

  const LowerBoundRun run =
      constant_lower_bound(param, spec, c.restarts, c.seed, StepPolicy{}, c.budget, box, c.workers);

  std::ofstream csv(art.dir / "results.csv");
  csv << "restart,iteration,objective,step\n";
  std::size_t best_restart = 0;
  for (std::size_t r = 0; r < run.trajectories.size(); ++r) {
    for (const TrajectoryPoint& pt : run.trajectories[r].log) {
      csv << r << ',' << pt.iteration << ',' << fmt(pt.objective) << ',' << fmt(pt.step) << '\n';
    }
    if (run.trajectories[r].best_value > run.trajectories[best_restart].best_value) best_restart = r;
  }
  csv.close();

  // theorem ratio of each trajectory's best point across the a grid
  const std::vector<double> grid = c.a_grid.empty() ? std::vector<double>{c.a} : c.a_grid;
  struct Norms {
    double entropy, l2_sq, w_sq;
  };
  std::vector<Norms> best_norms;
  for (const Trajectory& tr : run.trajectories) {
    const RealizedElement re = realize(param, tr.best_params, box);
    const double w = sobolev_norm(re.x, c.s);
    best_norms.push_back({entropy(re.measure), re.measure.integrate([](double v) { return v * v; }), w * w});
  }
  std::ofstream sweep(art.dir / "a_sweep.csv");
  sweep << "a,lower_bound,trivial_bound\n";
  nlohmann::json sweep_json = nlohmann::json::array();
  for (double a : grid) {
    const double additive = c.n / c.s * (std::log(a) + 1.0);
    double bound = -std::numeric_limits<double>::infinity();
    for (const Norms& nm : best_norms) bound = std::max(bound, (nm.entropy + additive * nm.l2_sq) / nm.w_sq);
    sweep << fmt(a) << ',' << fmt(bound) << ',' << fmt(additive) << '\n';
    sweep_json.push_back({{"a", a}, {"lower_bound", bound}, {"trivial_bound", additive}});
  }
  sweep.close();

  const Trajectory& best = run.trajectories[best_restart];
  const double rechecked = evaluate_objective(param, best.best_params, spec, TruncationBox(c.n, check_radius));
  int violations = 0;
  if (spec.kind == Objective::kCombinedSlackRatio && run.bound > 1.0 + c.tol_inequality) violations = 1;

  nlohmann::json restarts = nlohmann::json::array();
  for (std::size_t r = 0; r < run.trajectories.size(); ++r) {
    const Trajectory& tr = run.trajectories[r];
    restarts.push_back({{"restart", r},
                        {"start_objective", tr.log.front().objective},
                        {"best", tr.best_value},
                        {"iterations", tr.log.size() - 1},
                        {"converged", tr.status == AscentStatus::kConverged}});
  }
  nlohmann::json summary = base_summary(c, art, *theta);
  summary["objective"] = objective_name(spec.kind);
  summary["lower_bound"] = run.bound;
  summary["box_radius"] = box.radius();
  summary["best_restart"] = best_restart;
  summary["best_params"] = best.best_params;
  summary["recheck"] = {{"box_radius", check_radius}, {"objective", rechecked}};
  summary["restarts"] = restarts;
  summary["a_sweep"] = sweep_json;
  summary["violations"] = violations;
  return finish(art, std::move(summary), violations > 0 ? kViolation : kClean);
}

RunResult run(const RunConfig& config) {
  try {
    switch (config.command) {
      case Command::kVerify: return cmd_verify(config);
      case Command::kEmbed: return cmd_embed(config);
      case Command::kExtremal: return cmd_extremal(config);
      case Command::kKs: return cmd_ks(config);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
  } catch (const TruncationError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
  }
  return {kConfigError, {}, {}};
}

}  // namespace nct::cli
