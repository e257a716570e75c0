#include <doctest.h>

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "nct/extremal.hpp"
#include "support/generators.hpp"

using namespace nct;

namespace {

std::shared_ptr<const Theta> golden() {
  return std::make_shared<const Theta>(Theta::two_torus(0.6180339887498949));
}

constexpr double kE = std::numbers::e;

ObjectiveSpec theorem_spec(double a) {
  return {Objective::kTheoremRatio, SobolevParams::make(2, 0.5, a)};
}

}  // namespace

TEST_CASE("parameterization") {
  auto th = golden();
  const Parameterization param(th, 2);
  CHECK(param.size() == 25);
  CHECK(param.half().front() == MultiIndex{0, 1});

  Rng rng(31);
  std::vector<double> p(param.size());
  for (auto& v : p) v = rng.uniform(-1.0, 1.0);
  const NcElement h = param.element(p);
  CHECK(is_selfadjoint(h, 1e-15));
  CHECK(h.support_radius() == 2);
  CHECK(param.encode(h) == p);

  const auto r = random_selfadjoint(th, 2, 2.0, 5);
  CHECK(max_coeff_distance(param.element(param.encode(r)), r) < 1e-15);

  CHECK_THROWS_AS(param.element(std::vector<double>(3)), UsageError);
  CHECK_THROWS_AS(param.encode(random_selfadjoint(th, 3, 2.0, 1)), UsageError);
  CHECK(Parameterization(std::make_shared<const Theta>(Theta::zero(3)), 1).size() == 27);
}

TEST_CASE("realized exponential") {
  auto th = golden();
  const Parameterization param(th, 1);
  const TruncationBox box(2, 6);
  const auto one = realize(param, std::vector<double>(param.size(), 0.0), box);
  CHECK(max_coeff_distance(one.x, NcElement::scalar(th, 1.0)) < 1e-14);

  Rng rng(32);
  std::vector<double> p(param.size());
  for (auto& v : p) v = rng.uniform(-0.5, 0.5);
  const auto r = realize(param, p, box);
  const auto via_calculus = functional_calculus(param.element(p), SpectralFunction::exp(), box);
  CHECK(max_coeff_distance(r.x, via_calculus) < 1e-12);
  // compressing to the box breaks the involution symmetry only at truncation level
  const double defect = max_coeff_distance(involution(r.x), r.x);
  const auto wide = realize(param, p, TruncationBox(2, 10));
  CHECK(defect < 1e-5);
  CHECK(max_coeff_distance(involution(wide.x), wide.x) < 1e-3 * defect);
  CHECK(r.measure.min_node() > 0.0);
  CHECK(std::abs(r.measure.total_weight() - 1.0) < 1e-12);
  const double n2 = r.measure.integrate([](double v) { return v * v; });
  CHECK(std::abs(n2 - std::pow(l2_norm(r.x), 2.0)) < 1e-12 * n2);
  CHECK(std::abs(r.measure.integrate([](double v) { return v; }) - trace(r.x).real()) < 1e-12);
}

TEST_CASE("objective at the identity") {
  auto th = golden();
  const Parameterization param(th, 2);
  const TruncationBox box(2, 5);
  const std::vector<double> zero(param.size(), 0.0);
  for (double a : {1.0 / kE, 0.5, 1.0}) {
    const double expect = 2.0 / 0.5 * (std::log(a) + 1.0);
    CHECK(std::abs(evaluate_objective(param, zero, theorem_spec(a), box) - expect) < 1e-13);
  }
  auto th3 = std::make_shared<const Theta>(Theta::zero(3));
  const Parameterization p3(th3, 1);
  const ObjectiveSpec s3{Objective::kTheoremRatio, SobolevParams::make(3, 1.0, 0.5)};
  CHECK(std::abs(evaluate_objective(p3, std::vector<double>(p3.size(), 0.0), s3, TruncationBox(3, 2)) -
                 3.0 * (std::log(0.5) + 1.0)) < 1e-13);

  const ObjectiveSpec combined{Objective::kCombinedSlackRatio, SobolevParams::make(2, 0.5, 1.0)};
  CHECK(evaluate_objective(param, zero, combined, box) == 0.0);
  CHECK(std::string(objective_name(Objective::kTheoremRatio)) == "theorem_ratio");
}

TEST_CASE("objective determinism, gauge invariance and continuity") {
  auto th = golden();
  const Parameterization param(th, 2);
  const TruncationBox box(2, 5);
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = restart_start(param, 1 + trial, 404);
    for (const auto& spec : {theorem_spec(1.0 / kE), theorem_spec(0.7),
                             ObjectiveSpec{Objective::kCombinedSlackRatio, SobolevParams::make(2, 0.5, 0.5)}}) {
      const double f = evaluate_objective(param, p, spec, box);
      CHECK(evaluate_objective(param, p, spec, box) == f);

      const nlohmann::json j = p;
      const auto back = nlohmann::json::parse(j.dump()).get<std::vector<double>>();
      CHECK(evaluate_objective(param, back, spec, box) == f);

      for (double c : {0.5, 2.0}) {
        auto q = p;
        q[0] += std::log(c);
        CHECK(std::abs(evaluate_objective(param, q, spec, box) - f) < 1e-9 * (1.0 + std::abs(f)));
      }
      auto q = p;
      const std::size_t i = static_cast<std::size_t>(rng.next() % p.size());
      q[i] += 1e-6;
      CHECK(std::abs(evaluate_objective(param, q, spec, box) - f) < 1e-3);
    }
  }
  std::vector<double> bad(param.size(), 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(evaluate_objective(param, bad, theorem_spec(1.0), box), UsageError);
}

TEST_CASE("ascent") {
  auto th = golden();
  const Parameterization param(th, 2);
  const TruncationBox box(2, 5);
  const auto spec = theorem_spec(1.0 / kE);

  // h = 0 is a critical point of the theorem ratio
  const auto still = ascend(param, spec, std::vector<double>(param.size(), 0.0), StepPolicy{}, 5, box);
  CHECK(still.status == AscentStatus::kConverged);
  CHECK(still.log.size() == 1);
  CHECK(still.best_params == std::vector<double>(param.size(), 0.0));
  CHECK(std::abs(still.best_value) < 1e-14);

  const auto tr = ascend(param, spec, restart_start(param, 2, 11), StepPolicy{}, 6, box);
  CHECK(tr.log.size() >= 2);
  for (std::size_t i = 1; i < tr.log.size(); ++i) {
    CHECK(tr.log[i].objective > tr.log[i - 1].objective);
    CHECK(tr.log[i].iteration == static_cast<int>(i));
  }
  CHECK(tr.best_value == tr.log.back().objective);
  CHECK(evaluate_objective(param, tr.best_params, spec, box) == tr.best_value);

  const ObjectiveSpec comb{Objective::kCombinedSlackRatio, SobolevParams::make(2, 0.5, 0.5)};
  const auto tc = ascend(param, comb, restart_start(param, 1, 12), StepPolicy{}, 3, box);
  for (std::size_t i = 1; i < tc.log.size(); ++i) CHECK(tc.log[i].objective >= tc.log[i - 1].objective);
  CHECK(tc.best_value <= 1.0 + 1e-8);  // the combined bound holds

  CHECK_THROWS_AS(ascend(param, spec, std::vector<double>(param.size(), 0.0), StepPolicy{}, 0, box),
                  UsageError);

  const auto g = objective_gradient(param, std::vector<double>(param.size(), 0.0), spec, box);
  double gn = 0.0;
  for (double v : g) gn = std::max(gn, std::abs(v));
  CHECK(gn < 1e-8);
}

TEST_CASE("constant lower bound") {
  auto th = golden();
  const Parameterization param(th, 1);
  const TruncationBox box(2, 4);
  for (double a : {0.2, 1.0 / kE, 1.0}) {
    const auto spec = theorem_spec(a);
    const auto trivial = constant_lower_bound(param, spec, 1, 3, StepPolicy{}, 1, box);
    CHECK(std::abs(trivial.bound - 4.0 * (std::log(a) + 1.0)) < 1e-13);
  }

  const auto spec = theorem_spec(1.0 / kE);
  double prev = -1e300;
  for (int restarts : {1, 2, 4}) {
    const auto run = constant_lower_bound(param, spec, restarts, 21, StepPolicy{}, 3, box);
    CHECK(run.bound >= prev);
    prev = run.bound;
    REQUIRE(run.trajectories.size() == static_cast<std::size_t>(restarts));
    for (const auto& tr : run.trajectories) {
      for (const auto& pt : tr.log) CHECK(pt.objective <= run.bound);
    }
  }
  const auto serial = constant_lower_bound(param, spec, 4, 21, StepPolicy{}, 3, box, 1);
  const auto threaded = constant_lower_bound(param, spec, 4, 21, StepPolicy{}, 3, box, 3);
  CHECK(serial.bound == threaded.bound);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(serial.trajectories[r].best_params == threaded.trajectories[r].best_params);
  }

  // every ratio is dominated by the plug-in constant built from its own embedding ratio
  const auto pa = SobolevParams::make(2, 0.5, 1.0 / kE);
  for (const auto& tr : serial.trajectories) {
    const auto r = realize(param, tr.best_params, box);
    const double lp = lp_norm(r.measure, pa.p);
    const double w = sobolev_norm(r.x, pa.s);
    const auto c = build_constant(2, 0.5, pa.a, std::max(1.0, lp * lp / (w * w)));
    CHECK(tr.best_value <= c.value + 1e-9);
  }
  CHECK_THROWS_AS(constant_lower_bound(param, spec, 0, 1, StepPolicy{}, 1, box), UsageError);
}
