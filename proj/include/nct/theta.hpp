#pragma once

#include <cstdint>
#include <vector>

#include "nct/multi_index.hpp"

namespace nct {

/// Skew-symmetric deformation matrix of the noncommutative n-torus.
///
/// Generators obey U_k U_j = exp(2 pi i theta(j,k)) U_j U_k. Construction
/// validates skew-symmetry to exact equality as stored.
class Theta {
 public:
  /// Row-major n x n entries.
  Theta(int n, std::vector<double> entries);

  static Theta zero(int n);
  /// Two-torus with theta(0,1) = value.
  static Theta two_torus(double value);
  /// Upper-triangular entries uniform in [0, 1), seeded.
  static Theta random(int n, std::uint64_t seed);

  int dim() const noexcept { return n_; }
  double operator()(int j, int k) const noexcept {
    return entries_[static_cast<std::size_t>(j * n_ + k)];
  }
  const std::vector<double>& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return is_zero_; }

  /// sum_{j<l} theta(j,l) * a_j * b_l, the exponent (in units of 2 pi) that
  /// appears when normal-ordering monomials.
  double upper_form(const MultiIndex& a, const MultiIndex& b) const noexcept;

  void require_dim(const MultiIndex& k) const;

  friend bool operator==(const Theta& a, const Theta& b) noexcept {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  int n_;
  std::vector<double> entries_;
  bool is_zero_;
};

}  // namespace nct
