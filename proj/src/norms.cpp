#include "nct/norms.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "nct/parallel.hpp"
#include "nct/random.hpp"

namespace nct {

SobolevParams SobolevParams::make(int n, double s, double a) {
  if (n < 2) throw UsageError("SobolevParams: n must be >= 2");
  if (!(s > 0.0 && 2.0 * s < n)) {
    throw UsageError("SobolevParams: need 0 < s < n/2, got s = " + std::to_string(s));
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("SobolevParams: need a > 0");
  SobolevParams out;
  out.n = n;
  out.s = s;
  out.p = 2.0 * n / (n - 2.0 * s);
  out.epsilon = out.p / 2.0 - 1.0;
  out.a = a;
  out.b = std::numbers::e * a * a;
  return out;
}

double l2_norm(const NcElement& x) {
  double acc = 0.0;
  for (const auto& [k, c] : x.coeffs()) acc += std::norm(c);
  return std::sqrt(acc);
}

double sobolev_norm(const NcElement& x, double s) {
  if (!(s >= 0.0)) throw UsageError("sobolev_norm: negative order");
  double acc = 0.0;
  for (const auto& [k, c] : x.coeffs()) acc += std::pow(1.0 + k.norm_sq(), s) * std::norm(c);
  return std::sqrt(acc);
}

double homogeneous_sobolev_norm(const NcElement& x, double s) {
  if (!(s > 0.0)) throw UsageError("homogeneous_sobolev_norm: order must be positive");
  double acc = 0.0;
  for (const auto& [k, c] : x.coeffs()) {
    if (!k.is_zero()) acc += std::pow(k.norm_sq(), s) * std::norm(c);
  }
  return std::sqrt(acc);
}

double lp_norm(const SpectralMeasure& mu, double p) {
  if (!(p >= 1.0)) throw UsageError("lp_norm: need p >= 1");
  const double t = mu.integrate([p](double v) { return std::pow(std::abs(v), p); });
  return std::pow(t, 1.0 / p);
}

double lp_norm(const NcElement& x, double p, const TruncationBox& box) {
  if (!(p >= 1.0)) throw UsageError("lp_norm: need p >= 1");
  double scale = 1.0;
  for (const auto& [k, c] : x.coeffs()) scale = std::max(scale, std::abs(c));
  if (!is_selfadjoint(x, 1e-10 * scale)) throw UsageError("lp_norm: element is not selfadjoint");
  return lp_norm(spectral_measure(x, box), p);
}

double embedding_ratio(const NcElement& x, const SobolevParams& params,
                       const TruncationBox& box) {
  if (x.is_zero()) throw UsageError("embedding_ratio: zero element");
  return lp_norm(x, params.p, box) / sobolev_norm(x, params.s);
}

EmbeddingEstimate estimate_embedding_constant(const SobolevParams& params,
                                              const EmbeddingSampler& sampler) {
  if (sampler.count < 0) throw UsageError("estimate_embedding_constant: negative sample count");
  if (!sampler.theta || sampler.theta->dim() != params.n) {
    throw UsageError("estimate_embedding_constant: theta dimension must equal n");
  }
  const auto count = static_cast<std::size_t>(sampler.count);
  std::vector<std::optional<EmbeddingRow>> rows(count);
  std::vector<int> rejected(count, 0);

  parallel_for(count, sampler.workers, [&](std::size_t i) {
    const std::uint64_t seed = substream_seed(sampler.seed, i);
    const auto sample = draw_positive(sampler.theta, sampler.spec, seed, sampler.boxes,
                                      sampler.margin, sampler.max_attempts);
    if (!sample) {
      rejected[i] = sampler.max_attempts;
      return;
    }
    rejected[i] = sample->rejected;
    const NcElement& x = sample->x;
    const SpectralMeasure mu = spectral_measure(x, sampler.boxes.box_for(x));
    EmbeddingRow row;
    row.seed = seed;
    row.radius = sampler.spec.radius;
    row.s = params.s;
    row.p = params.p;
    row.l2 = l2_norm(x);
    row.w2s = sobolev_norm(x, params.s);
    row.lp = lp_norm(mu, params.p);
    row.ratio = row.lp / row.w2s;
    rows[i] = row;
  });

  EmbeddingEstimate out;
  for (std::size_t i = 0; i < count; ++i) {
    out.rejected += rejected[i];
    if (!rows[i]) {
      ++out.failed;
      continue;
    }
    out.supremum = std::max(out.supremum, rows[i]->ratio);
    out.rows.push_back(*rows[i]);
  }
  return out;
}

}  // namespace nct
