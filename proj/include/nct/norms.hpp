#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nct/element.hpp"
#include "nct/representation.hpp"
#include "nct/sampling.hpp"

namespace nct {

/// Analytic parameters tying the Sobolev order to the embedding exponent.
///
/// p = 2n / (n - 2s) is computed once; epsilon = p/2 - 1 so that
/// 2 epsilon + 2 == p holds exactly in floating point, and b = e a^2.
struct SobolevParams {
  int n = 2;
  double s = 0.5;
  double p = 4.0;
  double epsilon = 1.0;
  double a = 1.0;
  double b = 2.718281828459045;

  /// Requires n >= 2, 0 < s < n/2 and a > 0.
  static SobolevParams make(int n, double s, double a = 1.0);
};

double l2_norm(const NcElement& x);
/// (sum_k (1 + |k|^2)^s |x_k|^2)^{1/2}, s >= 0.
double sobolev_norm(const NcElement& x, double s);
/// (sum_k |k|^{2s} |x_k|^2)^{1/2}, s > 0. Only used for exploration.
double homogeneous_sobolev_norm(const NcElement& x, double s);

/// tau(|x|^p)^{1/p} for selfadjoint x, through the spectral measure of U^0.
double lp_norm(const NcElement& x, double p, const TruncationBox& box);
double lp_norm(const SpectralMeasure& mu, double p);

/// ||x||_{L_p} / ||x||_{W_2^s} with p, s taken from params.
double embedding_ratio(const NcElement& x, const SobolevParams& params, const TruncationBox& box);

/// One row of an embedding sweep (CSV: seed,radius,s,p,l2,w2s,lp,ratio).
struct EmbeddingRow {
  std::uint64_t seed = 0;
  int radius = 0;
  double s = 0.0;
  double p = 0.0;
  double l2 = 0.0;
  double w2s = 0.0;
  double lp = 0.0;
  double ratio = 0.0;
};

struct EmbeddingSampler {
  std::shared_ptr<const Theta> theta;
  int count = 1;
  SampleSpec spec;
  std::uint64_t seed = 0;
  BoxPolicy boxes;
  double margin = kDefaultPositivityMargin;
  int max_attempts = 50;
  unsigned workers = 1;
};

struct EmbeddingEstimate {
  /// Run-scoped supremum of the ratio; seeded with the ratio 1 of U^0.
  double supremum = 1.0;
  std::vector<EmbeddingRow> rows;  // by sample index
  int rejected = 0;                // candidates rejected for positivity
  int failed = 0;                  // samples with no admissible candidate
};

/// Empirical stand-in for the embedding constant: supremum of embedding_ratio
/// over strictly positive samples drawn from substreams of the sampler seed.
EmbeddingEstimate estimate_embedding_constant(const SobolevParams& params,
                                              const EmbeddingSampler& sampler);

}  // namespace nct
