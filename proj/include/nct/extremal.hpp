#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nct/logsobolev.hpp"

namespace nct {

/// Real coordinates for selfadjoint h supported on |k|_inf <= radius:
/// h_0 first, then (Re h_k, Im h_k) for each k in the positive half of the
/// cube in lexicographic order. Partners h_{-k} = conj(h_k) adjoint_phase(k).
class Parameterization {
 public:
  Parameterization(std::shared_ptr<const Theta> theta, int radius);

  const std::shared_ptr<const Theta>& theta() const noexcept { return theta_; }
  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return 1 + 2 * half_.size(); }
  const std::vector<MultiIndex>& half() const noexcept { return half_; }

  NcElement element(const std::vector<double>& params) const;
  /// Inverse of element() for selfadjoint h supported in the cube.
  std::vector<double> encode(const NcElement& h) const;

 private:
  std::shared_ptr<const Theta> theta_;
  int radius_;
  std::vector<MultiIndex> half_;
  std::vector<Complex> partner_phase_;
};

/// x = exp(h) computed on a truncation box: coefficients of exp(L_h) U^0 and
/// the U^0 spectral measure with nodes exp(lambda_j).
struct RealizedElement {
  NcElement x;
  SpectralMeasure measure;
};

RealizedElement realize(const Parameterization& param, const std::vector<double>& params,
                        const TruncationBox& box);

enum class Objective {
  kCombinedSlackRatio,  // entropy / rhs of the combined bound
  kTheoremRatio,        // (entropy + (n/s)(log a + 1) ||x||_2^2) / ||x||_{W_2^s}^2
};

struct ObjectiveSpec {
  Objective kind = Objective::kTheoremRatio;
  SobolevParams params;
};

const char* objective_name(Objective kind);

double objective_value(const RealizedElement& r, const ObjectiveSpec& spec);
double evaluate_objective(const Parameterization& param, const std::vector<double>& params,
                          const ObjectiveSpec& spec, const TruncationBox& box);

struct StepPolicy {
  double initial_step = 0.5;
  double fd_step = 1e-5;    // relative to max(1, |p_i|)
  double min_step = 1e-12;  // step * |gradient| below this counts as converged
  double grad_tol = 1e-8;
  int max_backtracks = 30;
};

struct TrajectoryPoint {
  int iteration = 0;
  double objective = 0.0;
  double step = 0.0;
};

enum class AscentStatus { kConverged, kBudgetExhausted };

struct Trajectory {
  std::vector<double> best_params;
  double best_value = 0.0;
  std::vector<TrajectoryPoint> log;  // iteration 0 is the start
  AscentStatus status = AscentStatus::kBudgetExhausted;
};

/// Central-difference gradient of the objective.
std::vector<double> objective_gradient(const Parameterization& param, const std::vector<double>& params,
                                       const ObjectiveSpec& spec, const TruncationBox& box,
                                       double fd_step = 1e-5);

/// Gradient ascent with backtracking. Only improving steps are accepted, so
/// the logged objective is nondecreasing.
Trajectory ascend(const Parameterization& param, const ObjectiveSpec& spec, std::vector<double> start,
                  const StepPolicy& policy, int budget, const TruncationBox& box);

/// Start of restart r: h = 0 for r = 0, otherwise random_selfadjoint with
/// decay 2 from substream r of seed, scaled by 0.1, 0.5 or 1.0 in turn.
std::vector<double> restart_start(const Parameterization& param, int restart, std::uint64_t seed);

struct LowerBoundRun {
  double bound = 0.0;                   // running max over every evaluation kept
  std::vector<Trajectory> trajectories;  // by restart index
  std::uint64_t seed = 0;
};

/// Largest theorem-type ratio found over the restarts.
LowerBoundRun constant_lower_bound(const Parameterization& param, const ObjectiveSpec& spec,
                                   int restarts, std::uint64_t seed, const StepPolicy& policy,
                                   int budget, const TruncationBox& box, unsigned workers = 1);

}  // namespace nct
