#include "nct/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nct/parallel.hpp"
#include "nct/random.hpp"

namespace nct {

Parameterization::Parameterization(std::shared_ptr<const Theta> theta, int radius)
    : theta_(std::move(theta)), radius_(radius) {
  if (!theta_) throw UsageError("Parameterization: null theta");
  if (radius < 0) throw UsageError("Parameterization: negative radius");
  for (const MultiIndex& k : cube_indices(theta_->dim(), radius)) {
    if (k.is_positive_half()) {
      half_.push_back(k);
      partner_phase_.push_back(adjoint_phase(*theta_, k));
    }
  }
}

NcElement Parameterization::element(const std::vector<double>& params) const {
  if (params.size() != size()) throw UsageError("Parameterization: wrong parameter count");
  CoeffMap c;
  c.emplace(MultiIndex::zero(theta_->dim()), Complex(params[0]));
  for (std::size_t i = 0; i < half_.size(); ++i) {
    const Complex hk(params[1 + 2 * i], params[2 + 2 * i]);
    c.emplace(half_[i], hk);
    c.emplace(-half_[i], std::conj(hk) * partner_phase_[i]);
  }
  return NcElement(theta_, std::move(c));
}

std::vector<double> Parameterization::encode(const NcElement& h) const {
  h.require_same_theta(NcElement::zero(theta_));
  if (h.support_radius() > radius_) throw UsageError("Parameterization: support exceeds radius");
  std::vector<double> out(size());
  out[0] = h.coeff(MultiIndex::zero(theta_->dim())).real();
  for (std::size_t i = 0; i < half_.size(); ++i) {
    const Complex hk = h.coeff(half_[i]);
    out[1 + 2 * i] = hk.real();
    out[2 + 2 * i] = hk.imag();
  }
  return out;
}

RealizedElement realize(const Parameterization& param, const std::vector<double>& params,
                        const TruncationBox& box) {
  const NcElement h = param.element(params);
  const GnsOperator op = eigendecompose(left_regular_matrix(h, box));
  const auto origin = static_cast<Eigen::Index>(box.origin());
  const Eigen::Index m = op.eigenvalues.size();

  Eigen::VectorXcd weighted(m);
  RealizedElement out{NcElement::zero(param.theta()), {}};
  out.measure.nodes.resize(static_cast<std::size_t>(m));
  out.measure.weights.resize(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) {
    const double e = std::exp(op.eigenvalues(j));
    const Complex v0 = op.eigenvectors(origin, j);
    weighted(j) = e * std::conj(v0);
    out.measure.nodes[static_cast<std::size_t>(j)] = e;
    out.measure.weights[static_cast<std::size_t>(j)] = std::norm(v0);
  }
  const Eigen::VectorXcd column = op.eigenvectors * weighted;
  CoeffMap c;
  for (std::size_t i = 0; i < box.size(); ++i) {
    c.emplace(box.index(i), column(static_cast<Eigen::Index>(i)));
  }
  out.x = NcElement(param.theta(), std::move(c));
  return out;
}

const char* objective_name(Objective kind) {
  return kind == Objective::kTheoremRatio ? "theorem_ratio" : "combined_slack_ratio";
}

double objective_value(const RealizedElement& r, const ObjectiveSpec& spec) {
  const SobolevParams& p = spec.params;
  if (spec.kind == Objective::kCombinedSlackRatio) {
    const StageCheck c = check_combined_bound(r.measure, p);
    return c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
  }
  const double ent = entropy(r.measure);
  const double norm_sq = r.measure.integrate([](double v) { return v * v; });
  const double w = sobolev_norm(r.x, p.s);
  return (ent + p.n / p.s * (std::log(p.a) + 1.0) * norm_sq) / (w * w);
}

double evaluate_objective(const Parameterization& param, const std::vector<double>& params,
                          const ObjectiveSpec& spec, const TruncationBox& box) {
  for (double v : params) {
    if (!std::isfinite(v)) throw UsageError("evaluate_objective: non-finite parameter");
  }
  return objective_value(realize(param, params, box), spec);
}

std::vector<double> objective_gradient(const Parameterization& param, const std::vector<double>& params,
                                       const ObjectiveSpec& spec, const TruncationBox& box,
                                       double fd_step) {
  std::vector<double> g(params.size());
  std::vector<double> probe = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double h = fd_step * std::max(1.0, std::abs(params[i]));
    probe[i] = params[i] + h;
    const double up = evaluate_objective(param, probe, spec, box);
    probe[i] = params[i] - h;
    const double down = evaluate_objective(param, probe, spec, box);
    probe[i] = params[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

double try_evaluate(const Parameterization& param, const std::vector<double>& params,
                    const ObjectiveSpec& spec, const TruncationBox& box) {
  try {
    const double v = evaluate_objective(param, params, spec, box);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  } catch (const PositivityError&) {
    // exp(h) underflowed below the admissible floor
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

Trajectory ascend(const Parameterization& param, const ObjectiveSpec& spec, std::vector<double> start,
                  const StepPolicy& policy, int budget, const TruncationBox& box) {
  if (budget < 1) throw UsageError("ascend: budget must be >= 1");
  Trajectory out;
  std::vector<double> x = std::move(start);
  double f = evaluate_objective(param, x, spec, box);
  double t = policy.initial_step;
  out.log.push_back({0, f, 0.0});

  for (int it = 1; it <= budget; ++it) {
    const std::vector<double> g = objective_gradient(param, x, spec, box, policy.fd_step);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (!(gn > policy.grad_tol)) {
      out.status = AscentStatus::kConverged;
      break;
    }
    bool accepted = false;
    std::vector<double> cand(x.size());
    for (int bt = 0; bt <= policy.max_backtracks && t >= policy.min_step; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] + t * g[i] / gn;
      const double fc = try_evaluate(param, cand, spec, box);
      if (fc > f) {
        x = cand;
        f = fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      out.status = AscentStatus::kConverged;
      break;
    }
    out.log.push_back({it, f, t});
    t *= 2.0;
  }
  out.best_params = std::move(x);
  out.best_value = f;
  return out;
}

std::vector<double> restart_start(const Parameterization& param, int restart, std::uint64_t seed) {
  if (restart == 0) return std::vector<double>(param.size(), 0.0);
  static constexpr double kScales[] = {0.1, 0.5, 1.0};
  const double scale_factor = kScales[(restart - 1) % 3];
  const NcElement h = random_selfadjoint(param.theta(), param.radius(), 2.0,
                                         substream_seed(seed, static_cast<std::uint64_t>(restart)));
  return param.encode(scale(h, scale_factor));
}

LowerBoundRun constant_lower_bound(const Parameterization& param, const ObjectiveSpec& spec,
                                   int restarts, std::uint64_t seed, const StepPolicy& policy,
                                   int budget, const TruncationBox& box, unsigned workers) {
  if (restarts < 1) throw UsageError("constant_lower_bound: restarts must be >= 1");
  LowerBoundRun run;
  run.seed = seed;
  run.trajectories.resize(static_cast<std::size_t>(restarts));
  parallel_for(run.trajectories.size(), workers, [&](std::size_t r) {
    run.trajectories[r] = ascend(param, spec, restart_start(param, static_cast<int>(r), seed),
                                 policy, budget, box);
  });
  run.bound = -std::numeric_limits<double>::infinity();
  for (const auto& tr : run.trajectories) {
    for (const auto& pt : tr.log) run.bound = std::max(run.bound, pt.objective);
  }
  return run;
}

}  // namespace nct
