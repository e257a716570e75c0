// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nct/cli.hpp"
#include "nct/extremal.hpp"
#include "nct/logsobolev.hpp"
#include "nct/oracle.hpp"
#include "support/clock_shift.hpp"
#include "support/generators.hpp"

using namespace nct;

namespace {

constexpr double kE = std::numbers::e;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<Outcome()> body;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_abs_coeff(const NcElement& x) {
  double m = 0.0;
  for (const auto& [k, c] : x.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

// ---------------------------------------------------------------------------

Outcome algebra_correctness() {
  Outcome out;
  double phase_err = 0.0;
  for (int q = 2; q <= 5; ++q) {
    for (int p = 1; p < q; ++p) {
      const nct::testing::ClockShift cs(p, q);
      const Theta th = Theta::two_torus(static_cast<double>(p) / q);
      const auto ks = cube_indices(2, 2);
      for (const auto& k : ks) {
        phase_err = std::max(phase_err, std::abs(adjoint_phase(th, k) - cs.adjoint_phase(k)));
        for (const auto& m : ks) {
          phase_err = std::max(phase_err, std::abs(structure_phase(th, k, m) - cs.product_phase(k, m)));
        }
      }
    }
  }

  Rng rng(101);
  double cocycle_err = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Theta th = Theta::random(2 + trial % 4, rng.next());
    const auto k = nct::testing::random_index(th.dim(), 4, rng);
    const auto m = nct::testing::random_index(th.dim(), 4, rng);
    const auto r = nct::testing::random_index(th.dim(), 4, rng);
    const Complex lhs = structure_phase(th, k, m) * structure_phase(th, k + m, r);
    const Complex rhs = structure_phase(th, m, r) * structure_phase(th, k, m + r);
    cocycle_err = std::max(cocycle_err, std::abs(lhs - rhs));
  }

  double assoc_err = 0.0;
  double trace_err = 0.0;
  double parseval_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    auto th = nct::testing::random_theta(n, rng);
    const int r = n == 4 ? 1 : 2;
    const auto x = nct::testing::random_element(th, r, rng);
    const auto y = nct::testing::random_element(th, r, rng);
    const auto z = nct::testing::random_element(th, 1, rng);
    const auto left = multiply(multiply(x, y), z);
    const auto right = multiply(x, multiply(y, z));
    assoc_err = std::max(assoc_err, max_coeff_distance(left, right) / (1.0 + max_abs_coeff(left)));
    const Complex txy = trace(multiply(x, y));
    const Complex tyx = trace(multiply(y, x));
    trace_err = std::max(trace_err, std::abs(txy - tyx) / (1.0 + std::abs(txy)));
    double norm_sq = 0.0;
    for (const auto& [k, c] : x.coeffs()) norm_sq += std::norm(c);
    const Complex xx = trace(multiply(involution(x), x));
    parseval_err = std::max(parseval_err, std::abs(xx - norm_sq) / norm_sq);
  }

  double conv_err = 0.0;
  auto th0 = std::make_shared<const Theta>(Theta::zero(3));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = nct::testing::random_element(th0, 1, rng);
    const auto y = nct::testing::random_element(th0, 2, rng);
    CoeffMap conv;
    for (const auto& [k, a] : x.coeffs()) {
      for (const auto& [m, b] : y.coeffs()) conv[k + m] += a * b;
    }
    conv_err = std::max(conv_err, max_coeff_distance(multiply(x, y), NcElement(th0, conv)));
  }

  const double tol = 1e-12;
  out.pass = phase_err <= tol && cocycle_err <= tol && assoc_err <= tol && trace_err <= tol &&
             parseval_err <= tol && conv_err <= tol;
  out.detail = "clock-shift " + num(phase_err) + ", cocycle " + num(cocycle_err) + ", assoc " +
               num(assoc_err) + ", trace " + num(trace_err) + ", parseval " + num(parseval_err) +
               ", convolution " + num(conv_err);
  return out;
}

Outcome oracle_agreement() {
  auto th0 = std::make_shared<const Theta>(Theta::zero(2));
  double worst = 0.0;
  int admitted = 0;
  for (int i = 0; i < 100; ++i) {
    SampleSpec spec;
    spec.radius = 1 + i % 3;
    const auto sample = draw_positive(th0, spec, substream_seed(202, static_cast<std::uint64_t>(i)), BoxPolicy{});
    if (!sample) continue;
    ++admitted;
    const NcElement& x = sample->x;
    const SpectralMeasure mu = spectral_measure(x, default_box(x));
    for (int p = 1; p <= 4; ++p) {
      const auto g = [p](double v) { return std::pow(v, p); };
      worst = std::max(worst, rel(mu.integrate(g), oracle::converged_quad_trace(x, g, 1e-13)));
    }
    for (double p : {3.0, 4.0}) {
      const double quad = std::pow(oracle::converged_quad_trace(
                                       x, [p](double v) { return std::pow(std::abs(v), p); }, 1e-13),
                                   1.0 / p);
      worst = std::max(worst, rel(lp_norm(mu, p), quad));
    }
    const double n2 = oracle::converged_quad_trace(x, [](double v) { return v * v; }, 1e-13);
    const auto ent = [n2](double v) { return v * v * std::log(v * v / n2); };
    worst = std::max(worst, rel(entropy(mu), oracle::converged_quad_trace(x, ent, 1e-13)));
  }
  return {admitted == 100 && worst < 1e-7,
          std::to_string(admitted) + " samples, worst relative error " + num(worst)};
}

// Samples shared by the identity and Jensen criteria.
struct ChainSample {
  SpectralMeasure mu;
  SobolevParams params;
};

const std::vector<ChainSample>& chain_population() {
  static const std::vector<ChainSample> population = [] {
    std::vector<ChainSample> out;
    for (int i = 0; i < 1000; ++i) {
      const int n = 2 + i % 2;
      const bool random_theta = (i / 2) % 2 == 1;
      const int eps = 1 + (i / 4) % 2;
      // p = 2n / (n - 2s) = 2 eps + 2
      const double s = n * eps / (2.0 * (eps + 1.0));
      const auto seed = substream_seed(303, static_cast<std::uint64_t>(i));
      auto theta = std::make_shared<const Theta>(random_theta ? Theta::random(n, seed) : Theta::zero(n));
      SampleSpec spec;
      spec.radius = n == 2 ? 2 : 1;
      BoxPolicy boxes;
      boxes.radius = n == 2 ? -1 : 3;
      const auto sample = draw_positive(theta, spec, seed, boxes);
      if (!sample) continue;
      const auto params = SobolevParams::make(n, s, 1.0);
      out.push_back({spectral_measure(sample->x, boxes.box_for(sample->x)), params});
    }
    return out;
  }();
  return population;
}

Outcome eps_identity() {
  const auto& pop = chain_population();
  double worst = 0.0;
  for (const auto& c : pop) {
    const StageCheck r = check_eps_identity(c.mu, c.params);
    worst = std::max(worst, std::abs(r.slack()) / (1.0 + std::abs(r.lhs)));
  }
  return {pop.size() == 1000 && worst < 1e-8,
          std::to_string(pop.size()) + " samples, max |lhs - rhs| / (1 + |lhs|) = " + num(worst)};
}

Outcome jensen_step() {
  const auto& pop = chain_population();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : pop) worst = std::min(worst, check_jensen_step(c.mu, c.params).relative_slack());

  double scalar_worst = 0.0;
  for (int n : {2, 3}) {
    auto th = std::make_shared<const Theta>(Theta::random(n, 7));
    for (double eps : {1.0, 2.0}) {
      const auto params = SobolevParams::make(n, n * eps / (2.0 * (eps + 1.0)));
      for (double c : {0.01, 0.5, 1.0, 3.0, 250.0}) {
        const auto r = check_jensen_step(NcElement::scalar(th, c), params, TruncationBox(n, 2));
        scalar_worst = std::max(scalar_worst, std::abs(r.slack()));
      }
    }
  }
  return {pop.size() == 1000 && worst >= -1e-8 && scalar_worst <= 1e-10,
          "min relative slack " + num(worst) + ", scalar multiples of 1 within " + num(scalar_worst)};
}

Outcome scalar_bound() {
  Rng rng(404);
  double worst = std::numeric_limits<double>::infinity();
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  for (int i = 0; i < 100000; ++i) {
    const double t = std::exp(rng.uniform(lo, hi));
    const double b = std::exp(rng.uniform(lo, hi));
    worst = std::min(worst, check_scalar_log_bound(t, b).slack());
  }
  double touch = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double b = std::exp(rng.uniform(lo, hi));
    touch = std::max(touch, std::abs(check_scalar_log_bound(1.0 / b, b).slack()));
  }
  return {worst >= -1e-14 && touch <= 1e-12,
          "min slack " + num(worst) + " over 1e5 pairs, |slack| at t = 1/b <= " + num(touch)};
}

Outcome combined_bound() {
  int violations = 0;
  int admitted = 0;
  double worst = std::numeric_limits<double>::infinity();
  int max_side = 0;
  for (double a : {1.0 / kE, 0.5, 1.0}) {
    const auto params = SobolevParams::make(2, 0.5, a);
    for (int i = 0; i < 1000; ++i) {
      const auto seed = substream_seed(505 + static_cast<std::uint64_t>(a * 1000), static_cast<std::uint64_t>(i));
      auto theta = std::make_shared<const Theta>(Theta::random(2, seed));
      const auto sample = draw_positive(theta, SampleSpec{}, seed, BoxPolicy{});
      if (!sample) continue;
      ++admitted;
      const TruncationBox box = default_box(sample->x);
      max_side = std::max(max_side, box.side());
      const double r = check_combined_bound(spectral_measure(sample->x, box), params).relative_slack();
      worst = std::min(worst, r);
      if (r < -1e-8) ++violations;
    }
  }
  return {admitted == 3000 && violations == 0 && max_side <= 33,
          std::to_string(admitted) + " samples, " + std::to_string(violations) +
              " violations, min relative slack " + num(worst) + ", box side " + std::to_string(max_side)};
}

Outcome constant_assembly() {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (double frac : {0.1, 0.25, 0.5, 0.9}) {
      const double s = frac * n / 2.0;
      for (double a : {0.1, 1.0 / kE, 0.5, 1.0, 3.0}) {
        for (double chat : {1.0, 1.7, 12.0}) {
          const auto c = build_constant(n, s, a, chat);
          worst = std::max(worst, rel(c.value, n * kE * a * a / (2.0 * s) * chat));
          const double add = n / s * (std::log(a) + 1.0);
          worst = std::max(worst, std::abs(c.additive_term - add) / std::max(1.0, std::abs(add)));
        }
      }
    }
  }
  const auto anchor = build_constant(2, 0.5, 1.0 / kE, 1.0);
  const double anchor_err = std::max(std::abs(anchor.value - 2.0 / kE), std::abs(anchor.additive_term));
  return {worst <= 1e-12 && anchor_err <= 1e-12,
          "grid error " + num(worst) + ", anchor (2/e, 0) error " + num(anchor_err)};
}

Outcome entropy_properties() {
  double min_entropy = std::numeric_limits<double>::infinity();
  double worst_scale = 0.0;
  int admitted = 0;
  for (int i = 0; i < 500; ++i) {
    const auto seed = substream_seed(606, static_cast<std::uint64_t>(i));
    const int n = 2 + i % 2;
    auto theta = std::make_shared<const Theta>(Theta::random(n, seed));
    SampleSpec spec;
    spec.radius = n == 2 ? 2 : 1;
    BoxPolicy boxes;
    boxes.radius = n == 2 ? -1 : 3;
    const auto sample = draw_positive(theta, spec, seed, boxes);
    if (!sample) continue;
    ++admitted;
    const TruncationBox box = boxes.box_for(sample->x);
    const double e = entropy(sample->x, box);
    min_entropy = std::min(min_entropy, e);
    for (double c : {0.5, 2.0, 10.0}) {
      const double ec = entropy(scale(sample->x, c), box);
      worst_scale = std::max(worst_scale, std::abs(ec - c * c * e) / (c * c * std::max(e, 1e-300)));
    }
  }
  return {admitted == 500 && min_entropy >= -1e-9 && worst_scale <= 1e-9,
          std::to_string(admitted) + " samples, min entropy " + num(min_entropy) +
              ", worst scaling error " + num(worst_scale)};
}

Outcome extremal_consistency() {
  auto theta = std::make_shared<const Theta>(Theta::two_torus(0.6180339887498949));
  const Parameterization param(theta, 2);
  const ObjectiveSpec spec{Objective::kTheoremRatio, SobolevParams::make(2, 0.5, 1.0 / kE)};
  const TruncationBox box(2, 5);
  const auto run = constant_lower_bound(param, spec, 20, 707, StepPolicy{}, 15, box);

  bool monotone = true;
  for (const auto& tr : run.trajectories) {
    for (std::size_t i = 1; i < tr.log.size(); ++i) monotone = monotone && tr.log[i].objective >= tr.log[i - 1].objective;
  }
  double baseline = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10000; ++i) {
    // random starts from a seed disjoint from the ascent's
    const auto p = restart_start(param, 1 + i, 808);
    baseline = std::max(baseline, evaluate_objective(param, p, spec, box));
  }
  return {monotone && run.bound >= baseline,
          "ascent bound " + num(run.bound) + " vs random-sample max " + num(baseline) +
              (monotone ? ", all trajectories monotone" : ", NON-MONOTONE trajectory")};
}

Outcome reproducibility() {
  const auto dir = std::filesystem::temp_directory_path() / "nct-acceptance-repro";
  std::filesystem::remove_all(dir);
  cli::RunConfig c;
  c.command = cli::Command::kVerify;
  c.samples = 100;
  c.seed = 909;
  c.out = dir.string();
  const auto a = cli::run(c);
  const auto b = cli::run(c);
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string ba = slurp(a.directory / "results.csv");
  const std::string bb = slurp(b.directory / "results.csv");
  std::filesystem::remove_all(dir);
  return {a.exit_code == 0 && b.exit_code == 0 && !ba.empty() && ba == bb,
          std::to_string(ba.size()) + " bytes, " + (ba == bb ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"algebra correctness", 10.0, algebra_correctness},
      {"oracle agreement", 60.0, oracle_agreement},
      {"eps identity", 0.0, eps_identity},
      {"jensen step", 0.0, jensen_step},
      {"scalar log bound", 0.0, scalar_bound},
      {"combined bound", 600.0, combined_bound},
      {"constant assembly", 0.0, constant_assembly},
      {"entropy properties", 0.0, entropy_properties},
      {"extremal consistency", 0.0, extremal_consistency},
      {"reproducibility", 0.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && dt > c.time_limit_s) {
      o.pass = false;
      o.detail += ", exceeded " + num(c.time_limit_s) + " s";
    }
    std::printf("%s  %-22s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), dt);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
