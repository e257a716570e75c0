#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>

#include "nct/element.hpp"
#include "nct/representation.hpp"

namespace nct {

/// How truncation boxes are chosen for an element: a fixed radius, or the
/// default policy of default_box when radius < 0.
struct BoxPolicy {
  int radius = -1;
  std::size_t cap = kDefaultMatrixCap;

  TruncationBox box_for(const NcElement& x) const;
};

/// Strictly positive candidates x = h' + c U^0, where h' is the non-constant
/// part of a random selfadjoint element and c = shift * L + floor with
/// L = sum_{k != 0} |h_k| (an upper bound on the norm of h'). Shifts below 1
/// can produce non-positive candidates, which the sampler rejects.
struct SampleSpec {
  int radius = 2;
  double decay = 2.0;
  double amplitude = 1.0;
  double shift_lo = 0.6;
  double shift_hi = 1.5;
  double floor = 0.05;
};

NcElement positive_candidate(std::shared_ptr<const Theta> theta, const SampleSpec& spec,
                             std::uint64_t seed);

struct PositiveSample {
  NcElement x;
  double min_eigenvalue = 0.0;
  int rejected = 0;  // candidates discarded before this one
};

/// Draws candidates from substreams of `seed` until one passes
/// strict_positivity_check at `margin`; nullopt after max_attempts rejections.
std::optional<PositiveSample> draw_positive(std::shared_ptr<const Theta> theta,
                                            const SampleSpec& spec, std::uint64_t seed,
                                            const BoxPolicy& boxes,
                                            double margin = kDefaultPositivityMargin,
                                            int max_attempts = 50);

/// Element sum_k c_k U_1^k U_2^{k l} of the two-torus.
NcElement one_parameter_element(std::shared_ptr<const Theta> theta,
                                const std::map<int, Complex>& coeffs, int l);

/// Selfadjoint coefficients c_k (|k| <= radius) of a strictly positive
/// candidate in the one-parameter family, built like positive_candidate.
std::map<int, Complex> one_parameter_candidate(const Theta& theta, int l, const SampleSpec& spec,
                                               std::uint64_t seed);

}  // namespace nct
