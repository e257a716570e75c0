#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nct/multi_index.hpp"
#include "nct/theta.hpp"

namespace nct {

using Complex = std::complex<double>;
using CoeffMap = std::map<MultiIndex, Complex>;

/// Finitely supported element x = sum_k x_k U^k of the smooth noncommutative
/// torus, with U^k = U_1^{k_1} ... U_n^{k_n}.
///
/// Immutable after construction. Exact zero coefficients are dropped, so the
/// support radius is the max infinity-norm over stored indices.
class NcElement {
 public:
  NcElement(std::shared_ptr<const Theta> theta, CoeffMap coeffs);
  NcElement(const Theta& theta, CoeffMap coeffs)
      : NcElement(std::make_shared<const Theta>(theta), std::move(coeffs)) {}

  static NcElement zero(std::shared_ptr<const Theta> theta);
  static NcElement scalar(std::shared_ptr<const Theta> theta, Complex c);
  /// The monomial U^k.
  static NcElement basis(std::shared_ptr<const Theta> theta, const MultiIndex& k, Complex c = 1.0);

  const Theta& theta() const noexcept { return *theta_; }
  const std::shared_ptr<const Theta>& theta_ptr() const noexcept { return theta_; }
  int dim() const noexcept { return theta_->dim(); }
  const CoeffMap& coeffs() const noexcept { return coeffs_; }
  int support_radius() const noexcept { return support_radius_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// x_k, zero when k is not stored.
  Complex coeff(const MultiIndex& k) const;

  void require_same_theta(const NcElement& other) const;

 private:
  std::shared_ptr<const Theta> theta_;
  CoeffMap coeffs_;
  int support_radius_ = 0;
};

// Phases --------------------------------------------------------------------

/// lambda(k, m) with U^k U^m = lambda(k, m) U^{k+m}.
Complex structure_phase(const Theta& theta, const MultiIndex& k, const MultiIndex& m);

/// mu(k) with (U^k)^* = mu(k) U^{-k}.
Complex adjoint_phase(const Theta& theta, const MultiIndex& k);

/// exp(2 pi i t), reducing t modulo 1 first so integer parts cost no accuracy.
Complex unit_phase(double turns);

// Algebra -------------------------------------------------------------------

NcElement multiply(const NcElement& x, const NcElement& y);
NcElement involution(const NcElement& x);
Complex trace(const NcElement& x);
/// <x, y> = tau(x y^*) = sum_k x_k conj(y_k).
Complex inner_product(const NcElement& x, const NcElement& y);
NcElement apply_action(const NcElement& x, const std::vector<double>& s);
/// Derivation along axis j, 1-based as in the usual notation (1 <= j <= n).
NcElement derivation(const NcElement& x, int j);

NcElement add(const NcElement& x, const NcElement& y);
NcElement subtract(const NcElement& x, const NcElement& y);
NcElement scale(const NcElement& x, Complex c);

/// Coefficientwise comparison with absolute tolerance.
bool approx_equal(const NcElement& x, const NcElement& y, double tol = 1e-12);
/// max_k |x_k - y_k|.
double max_coeff_distance(const NcElement& x, const NcElement& y);
/// True when x^* equals x coefficientwise within tol.
bool is_selfadjoint(const NcElement& x, double tol = 1e-12);

/// h = h^* with coefficients drawn uniformly in the unit disk and scaled by
/// (1 + |k|^2)^{-decay}, supported on the box |k|_inf <= radius. Free values
/// live on the positive half of the box; partners are fixed by adjoint_phase.
NcElement random_selfadjoint(std::shared_ptr<const Theta> theta, int radius, double decay,
                             std::uint64_t seed);

// Persistence ---------------------------------------------------------------

/// {"theta": [[...]], "coeffs": [[[k...], re, im], ...]}
nlohmann::json to_json(const NcElement& x);
NcElement element_from_json(const nlohmann::json& j);

}  // namespace nct
