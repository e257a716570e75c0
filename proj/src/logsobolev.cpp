#include "nct/logsobolev.hpp"

#include <cmath>
#include <numbers>

#include "nct/sampling.hpp"

namespace nct {

namespace {

double second_moment(const SpectralMeasure& mu) {
  return mu.integrate([](double v) { return v * v; });
}

// ||x||_p^2 = (sum_j w_j lambda_j^p)^{2/p}
double lp_norm_sq(const SpectralMeasure& mu, double p) {
  const double m = mu.integrate([p](double v) { return std::pow(v, p); });
  return std::pow(m, 2.0 / p);
}

void require_admissible(const SpectralMeasure& mu, const char* context) {
  require_positive(mu, kDefaultDomainFloor, context);
}

SpectralMeasure positive_measure(const NcElement& x, const TruncationBox& box, const char* context) {
  SpectralMeasure mu = spectral_measure(x, box);
  require_admissible(mu, context);
  return mu;
}

}  // namespace

double StageCheck::relative_slack() const noexcept { return slack() / (1.0 + std::abs(lhs)); }

double entropy(const SpectralMeasure& mu) {
  require_admissible(mu, "entropy");
  const double norm_sq = second_moment(mu);
  return mu.integrate([norm_sq](double v) { return v * v * std::log(v * v / norm_sq); });
}

double entropy(const NcElement& x, const TruncationBox& box) {
  return entropy(positive_measure(x, box, "entropy"));
}

StageCheck check_eps_identity(const SpectralMeasure& mu, const SobolevParams& params) {
  const double eps = params.epsilon;
  const double norm_sq = second_moment(mu);
  const double norm_pow = std::pow(norm_sq, eps);
  StageCheck out;
  out.lhs = entropy(mu);
  const double inner = mu.integrate([&](double v) {
    return v * v / norm_sq * std::log(std::pow(v, 2.0 * eps) / norm_pow);
  });
  out.rhs = norm_sq / eps * inner;
  return out;
}

StageCheck check_eps_identity(const NcElement& x, const SobolevParams& params,
                              const TruncationBox& box) {
  return check_eps_identity(positive_measure(x, box, "check_eps_identity"), params);
}

StageCheck check_jensen_step(const SpectralMeasure& mu, const SobolevParams& params) {
  require_admissible(mu, "check_jensen_step");
  const double eps = params.epsilon;
  const double norm_sq = second_moment(mu);
  const double norm_pow = std::pow(norm_sq, eps);
  StageCheck out;
  out.lhs = mu.integrate([&](double v) {
    return v * v / norm_sq * std::log(std::pow(v, 2.0 * eps) / norm_pow);
  });
  out.rhs = (eps + 1.0) * std::log(lp_norm_sq(mu, params.p) / norm_sq);
  return out;
}

StageCheck check_jensen_step(const NcElement& x, const SobolevParams& params,
                             const TruncationBox& box) {
  return check_jensen_step(positive_measure(x, box, "check_jensen_step"), params);
}

StageCheck check_scalar_log_bound(double t, double b) {
  if (!(t > 0.0) || !(b > 0.0) || !std::isfinite(t) || !std::isfinite(b)) {
    throw UsageError("check_scalar_log_bound: need t > 0 and b > 0");
  }
  return {std::log(t), b * t - std::log(b) - 1.0};
}

StageCheck check_combined_bound(const SpectralMeasure& mu, const SobolevParams& params) {
  const double eps = params.epsilon;
  const double norm_sq = second_moment(mu);
  StageCheck out;
  out.lhs = entropy(mu);
  out.rhs = (eps + 1.0) / eps *
            (params.b * lp_norm_sq(mu, params.p) - (std::log(params.b) + 1.0) * norm_sq);
  return out;
}

StageCheck check_combined_bound(const NcElement& x, const SobolevParams& params,
                                const TruncationBox& box) {
  return check_combined_bound(positive_measure(x, box, "check_combined_bound"), params);
}

bool LogSobolevConstant::consistent(double tol) const {
  const double v = n * std::numbers::e * a * a / (2.0 * s) * embedding_constant;
  const double add = n / s * (std::log(a) + 1.0);
  return std::abs(v - value) <= tol * std::max(1.0, std::abs(v)) &&
         std::abs(add - additive_term) <= tol * std::max(1.0, std::abs(add));
}

LogSobolevConstant build_constant(int n, double s, double a, double embedding_constant) {
  SobolevParams::make(n, s, a);  // range validation
  if (!(embedding_constant >= 1.0) || !std::isfinite(embedding_constant)) {
    throw UsageError("build_constant: embedding constant must be finite and >= 1");
  }
  LogSobolevConstant c;
  c.n = n;
  c.s = s;
  c.a = a;
  c.embedding_constant = embedding_constant;
  c.value = n * std::numbers::e * a * a / (2.0 * s) * embedding_constant;
  c.additive_term = n / s * (std::log(a) + 1.0);
  return c;
}

double embedding_constant_from(const EmbeddingEstimate& estimate) {
  return estimate.supremum * estimate.supremum;
}

double stationary_a(double l2_sq, double sobolev_sq, double embedding_constant) {
  if (!(l2_sq > 0.0 && sobolev_sq > 0.0 && embedding_constant > 0.0)) {
    throw UsageError("stationary_a: arguments must be positive");
  }
  return std::sqrt(l2_sq / (std::numbers::e * embedding_constant * sobolev_sq));
}

StageCheck check_theorem(const SpectralMeasure& mu, double sobolev_sq,
                         const LogSobolevConstant& constant) {
  StageCheck out;
  out.lhs = entropy(mu);
  out.rhs = constant.value * sobolev_sq - constant.additive_term * second_moment(mu);
  return out;
}

StageCheck check_theorem(const NcElement& x, const LogSobolevConstant& constant,
                         const SobolevParams& params, const TruncationBox& box) {
  if (constant.n != params.n || constant.s != params.s) {
    throw UsageError("check_theorem: constant built for different (n, s)");
  }
  const double w = sobolev_norm(x, params.s);
  return check_theorem(positive_measure(x, box, "check_theorem"), w * w, constant);
}

StageCheck ks_special_form_check(const std::map<int, Complex>& coeffs, int l,
                                 std::shared_ptr<const Theta> theta2, const TruncationBox& box) {
  if (l == 0) throw UsageError("ks_special_form_check: l must be nonzero");
  if (!theta2 || theta2->dim() != 2) throw UsageError("ks_special_form_check: needs a two-torus");
  const NcElement x = one_parameter_element(theta2, coeffs, l);
  const SpectralMeasure mu = positive_measure(x, box, "ks_special_form_check");
  double gradient = 0.0;
  double norm_sq = 0.0;
  for (const auto& [k, c] : coeffs) {
    gradient += (1.0 + std::abs(l)) * std::abs(k) * std::norm(c);
    norm_sq += std::norm(c);
  }
  StageCheck out;
  out.lhs = mu.integrate([](double v) { return v * v * std::log(v); });
  out.rhs = gradient + norm_sq * std::log(std::sqrt(norm_sq));
  return out;
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::kEpsIdentity: return "eps_identity";
    case Stage::kJensen: return "jensen";
    case Stage::kScalarBound: return "scalar_bound";
    case Stage::kCombined: return "combined";
    case Stage::kTheorem: return "theorem";
  }
  return "unknown";
}

bool violates(Stage stage, const StageCheck& check, const ChainTolerances& tol) {
  const double r = check.relative_slack();
  if (!std::isfinite(r)) return true;
  if (stage == Stage::kEpsIdentity) return std::abs(r) >= tol.identity;
  return r < -tol.inequality;
}

std::vector<Stage> ProofChainReport::violations(const ChainTolerances& tol) const {
  std::vector<Stage> out;
  for (const auto& s : stages) {
    if (violates(s.stage, s.check, tol)) out.push_back(s.stage);
  }
  return out;
}

ProofChainReport verify_chain(const NcElement& x, const SobolevParams& params,
                              const TruncationBox& box,
                              const std::optional<LogSobolevConstant>& constant,
                              std::size_t sample) {
  return verify_chain(spectral_measure(x, box), x, params, box.radius(), constant, sample);
}

ProofChainReport verify_chain(const SpectralMeasure& mu, const NcElement& x,
                              const SobolevParams& params, int box_radius,
                              const std::optional<LogSobolevConstant>& constant,
                              std::size_t sample) {
  if (x.dim() != params.n) throw UsageError("verify_chain: element dimension differs from n");
  if (constant && (constant->n != params.n || constant->s != params.s)) {
    throw UsageError("verify_chain: constant built for different (n, s)");
  }
  require_admissible(mu, "verify_chain");
  ProofChainReport report;
  report.sample = sample;
  report.box_radius = box_radius;
  report.min_eigenvalue = mu.min_node();
  const double l2 = l2_norm(x);
  report.parseval_defect = std::abs(second_moment(mu) - l2 * l2);
  report.entropy = entropy(mu);

  report.stages.push_back({Stage::kEpsIdentity, check_eps_identity(mu, params)});
  report.stages.push_back({Stage::kJensen, check_jensen_step(mu, params)});
  const double t = lp_norm_sq(mu, params.p) / second_moment(mu);
  report.stages.push_back({Stage::kScalarBound, check_scalar_log_bound(t, params.b)});
  report.stages.push_back({Stage::kCombined, check_combined_bound(mu, params)});
  if (constant) {
    const double w = sobolev_norm(x, params.s);
    report.stages.push_back({Stage::kTheorem, check_theorem(mu, w * w, *constant)});
  }
  return report;
}

}  // namespace nct
