#include "nct/sampling.hpp"

#include <cmath>
#include <numbers>

#include "nct/random.hpp"

namespace nct {

TruncationBox BoxPolicy::box_for(const NcElement& x) const {
  if (radius < 0) return default_box(x, cap);
  if (radius < x.support_radius()) {
    throw TruncationError("BoxPolicy: fixed radius " + std::to_string(radius) +
                          " is below the support radius " + std::to_string(x.support_radius()));
  }
  return TruncationBox(x.dim(), radius);
}

NcElement positive_candidate(std::shared_ptr<const Theta> theta, const SampleSpec& spec,
                             std::uint64_t seed) {
  Rng rng(seed);
  const NcElement h = random_selfadjoint(theta, spec.radius, spec.decay, rng.next());
  const MultiIndex zero = MultiIndex::zero(theta->dim());
  CoeffMap coeffs;
  double off_norm = 0.0;
  for (const auto& [k, c] : h.coeffs()) {
    if (k.is_zero()) continue;
    coeffs.emplace(k, spec.amplitude * c);
    off_norm += spec.amplitude * std::abs(c);
  }
  const double shift = rng.uniform(spec.shift_lo, spec.shift_hi);
  coeffs[zero] = Complex(shift * off_norm + spec.floor, 0.0);
  return NcElement(std::move(theta), std::move(coeffs));
}

std::optional<PositiveSample> draw_positive(std::shared_ptr<const Theta> theta,
                                            const SampleSpec& spec, std::uint64_t seed,
                                            const BoxPolicy& boxes, double margin,
                                            int max_attempts) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    NcElement x = positive_candidate(theta, spec, substream_seed(seed, static_cast<std::uint64_t>(attempt)));
    const PositivityReport report = strict_positivity_check(x, boxes.box_for(x), margin);
    if (report.positive) return PositiveSample{std::move(x), report.min_eigenvalue, attempt};
  }
  return std::nullopt;
}

NcElement one_parameter_element(std::shared_ptr<const Theta> theta,
                                const std::map<int, Complex>& coeffs, int l) {
  if (theta->dim() != 2) throw UsageError("one_parameter_element: requires the two-torus");
  CoeffMap out;
  for (const auto& [k, c] : coeffs) out[MultiIndex{k, k * l}] += c;
  return NcElement(std::move(theta), std::move(out));
}

std::map<int, Complex> one_parameter_candidate(const Theta& theta, int l, const SampleSpec& spec,
                                               std::uint64_t seed) {
  if (theta.dim() != 2) throw UsageError("one_parameter_candidate: requires the two-torus");
  Rng rng(seed);
  std::map<int, Complex> c;
  double off_norm = 0.0;
  for (int k = 1; k <= spec.radius; ++k) {
    const double weight = spec.amplitude * std::pow(1.0 + static_cast<double>(k) * k, -spec.decay);
    const Complex z = std::polar(std::sqrt(rng.uniform()) * weight,
                                 2.0 * std::numbers::pi * rng.uniform());
    c[k] = z;
    c[-k] = std::conj(z) * adjoint_phase(theta, MultiIndex{k, k * l});
    off_norm += 2.0 * std::abs(z);
  }
  c[0] = rng.uniform(spec.shift_lo, spec.shift_hi) * off_norm + spec.floor;
  return c;
}

}  // namespace nct
