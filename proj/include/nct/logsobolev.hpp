#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nct/norms.hpp"

namespace nct {

/// Two sides of one inequality (or identity) evaluated on a sample.
struct StageCheck {
  double lhs = 0.0;
  double rhs = 0.0;

  double slack() const noexcept { return rhs - lhs; }
  /// slack / (1 + |lhs|)
  double relative_slack() const noexcept;
};

/// tau[x^2 log(x^2 / ||x||_2^2)] from the U^0 spectral measure of x.
double entropy(const SpectralMeasure& mu);
double entropy(const NcElement& x, const TruncationBox& box);

/// entropy = (||x||^2 / eps) tau[(x^2/||x||^2) log(x^{2 eps} / ||x||^{2 eps})].
StageCheck check_eps_identity(const SpectralMeasure& mu, const SobolevParams& params);
StageCheck check_eps_identity(const NcElement& x, const SobolevParams& params,
                              const TruncationBox& box);

/// tau[(x^2/||x||^2) log(x^{2 eps}/||x||^{2 eps})] <= (eps + 1) log(||x||_p^2 / ||x||_2^2).
StageCheck check_jensen_step(const SpectralMeasure& mu, const SobolevParams& params);
StageCheck check_jensen_step(const NcElement& x, const SobolevParams& params,
                             const TruncationBox& box);

/// log t <= b t - log b - 1 for t, b > 0.
StageCheck check_scalar_log_bound(double t, double b);

/// entropy <= ((eps + 1)/eps) (b ||x||_p^2 - (log b + 1) ||x||_2^2).
StageCheck check_combined_bound(const SpectralMeasure& mu, const SobolevParams& params);
StageCheck check_combined_bound(const NcElement& x, const SobolevParams& params,
                                const TruncationBox& box);

/// Plug-in constant of the log-Sobolev inequality
///   entropy(x) <= value ||x||_{W_2^s}^2 - additive_term ||x||_2^2.
/// embedding_constant bounds ||x||_p^2 / ||x||_{W_2^s}^2, the square of the
/// embedding ratio.
struct LogSobolevConstant {
  int n = 2;
  double s = 0.5;
  double a = 1.0;
  double embedding_constant = 1.0;
  double value = 0.0;
  double additive_term = 0.0;

  /// Whether value and additive_term match the closed forms within tol.
  bool consistent(double tol = 1e-12) const;
};

/// value = (n e a^2 / 2s) C, additive_term = (n/s)(log a + 1). Requires C >= 1.
LogSobolevConstant build_constant(int n, double s, double a, double embedding_constant);
/// The embedding constant implied by an empirical ratio supremum (its square).
double embedding_constant_from(const EmbeddingEstimate& estimate);

/// The a minimizing the theorem's right-hand side for fixed norms:
/// a^2 = ||x||_2^2 / (e C ||x||_W^2).
double stationary_a(double l2_sq, double sobolev_sq, double embedding_constant);

StageCheck check_theorem(const SpectralMeasure& mu, double sobolev_sq,
                         const LogSobolevConstant& constant);
StageCheck check_theorem(const NcElement& x, const LogSobolevConstant& constant,
                         const SobolevParams& params, const TruncationBox& box);

/// Two-torus inequality for x = sum_k x_k U_1^k U_2^{kl}:
///   tau(x^2 log x) <= sum_k (1 + |l|) |k| |x_k|^2 + ||x||_2^2 log ||x||_2.
StageCheck ks_special_form_check(const std::map<int, Complex>& coeffs, int l,
                                 std::shared_ptr<const Theta> theta2, const TruncationBox& box);

struct ChainTolerances {
  double identity = 1e-8;    // relative, for the eps identity
  double inequality = 1e-8;  // relative slack floor for every inequality
};

enum class Stage { kEpsIdentity, kJensen, kScalarBound, kCombined, kTheorem };
const char* stage_name(Stage stage);

struct StageResult {
  Stage stage;
  StageCheck check;
};

struct ProofChainReport {
  std::size_t sample = 0;
  double entropy = 0.0;
  std::vector<StageResult> stages;  // in chain order; theorem only with a constant
  int box_radius = 0;
  double min_eigenvalue = 0.0;
  /// |sum_j w_j lambda_j^2 - sum_k |x_k|^2|, zero up to rounding for an adequate box.
  double parseval_defect = 0.0;

  /// Stages whose check fails the tolerances.
  std::vector<Stage> violations(const ChainTolerances& tol = {}) const;
};

bool violates(Stage stage, const StageCheck& check, const ChainTolerances& tol);

/// Runs every stage on one strictly positive sample from a single spectral measure.
ProofChainReport verify_chain(const NcElement& x, const SobolevParams& params,
                              const TruncationBox& box,
                              const std::optional<LogSobolevConstant>& constant = std::nullopt,
                              std::size_t sample = 0);
/// Same, from a measure already computed for x on a box of the given radius.
ProofChainReport verify_chain(const SpectralMeasure& mu, const NcElement& x,
                              const SobolevParams& params, int box_radius,
                              const std::optional<LogSobolevConstant>& constant = std::nullopt,
                              std::size_t sample = 0);

}  // namespace nct
