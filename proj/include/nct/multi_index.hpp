#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <initializer_list>
#include <string>
#include <vector>

#include "nct/errors.hpp"

namespace nct {

/// Largest supported torus dimension. Any box of radius >= 1 in dimension 8
/// already exceeds the dense matrix cap, so this bound is never the limiting one.
inline constexpr int kMaxDim = 8;

/// Integer exponent vector k = (k_1, ..., k_n) labelling the monomial U^k.
class MultiIndex {
 public:
  MultiIndex() = default;

  explicit MultiIndex(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw UsageError("MultiIndex: dimension " + std::to_string(dim) + " outside [1, " +
                       std::to_string(kMaxDim) + "]");
    }
  }

  MultiIndex(std::initializer_list<int> values) : MultiIndex(static_cast<int>(values.size())) {
    std::copy(values.begin(), values.end(), k_.begin());
  }

  static MultiIndex zero(int dim) { return MultiIndex(dim); }

  int dim() const noexcept { return dim_; }
  int operator[](int i) const noexcept { return k_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) noexcept { return k_[static_cast<std::size_t>(i)]; }

  bool is_zero() const noexcept {
    return std::all_of(k_.begin(), k_.begin() + dim_, [](int v) { return v == 0; });
  }

  int inf_norm() const noexcept {
    int r = 0;
    for (int i = 0; i < dim_; ++i) r = std::max(r, std::abs(k_[i]));
    return r;
  }

  /// Squared Euclidean length |k|^2.
  double norm_sq() const noexcept {
    double r = 0.0;
    for (int i = 0; i < dim_; ++i) r += static_cast<double>(k_[i]) * k_[i];
    return r;
  }

  /// True when k lies in the "positive half" of Z^n: first nonzero entry > 0.
  bool is_positive_half() const noexcept {
    for (int i = 0; i < dim_; ++i) {
      if (k_[i] != 0) return k_[i] > 0;
    }
    return false;
  }

  MultiIndex operator-() const {
    MultiIndex r(*this);
    for (int i = 0; i < dim_; ++i) r.k_[i] = -k_[i];
    return r;
  }

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    a.require_same_dim(b);
    MultiIndex r(a);
    for (int i = 0; i < a.dim_; ++i) r.k_[i] += b.k_[i];
    return r;
  }

  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
    a.require_same_dim(b);
    MultiIndex r(a);
    for (int i = 0; i < a.dim_; ++i) r.k_[i] -= b.k_[i];
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) noexcept {
    return a.dim_ == b.dim_ && std::equal(a.k_.begin(), a.k_.begin() + a.dim_, b.k_.begin());
  }

  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) noexcept {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.k_.begin(), a.k_.begin() + a.dim_,
                                                  b.k_.begin(), b.k_.begin() + b.dim_);
  }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < dim_; ++i) {
      if (i) s += ",";
      s += std::to_string(k_[i]);
    }
    return s + ")";
  }

 private:
  void require_same_dim(const MultiIndex& other) const {
    if (dim_ != other.dim_) throw UsageError("MultiIndex: dimension mismatch");
  }

  int dim_ = 0;
  std::array<int, kMaxDim> k_{};
};

/// All k in Z^dim with |k|_inf <= radius, lexicographic with the last
/// component varying fastest.
inline std::vector<MultiIndex> cube_indices(int dim, int radius) {
  std::vector<MultiIndex> out;
  if (radius < 0) return out;
  MultiIndex k(dim);
  for (int i = 0; i < dim; ++i) k[i] = -radius;
  while (true) {
    out.push_back(k);
    int i = dim - 1;
    while (i >= 0 && k[i] == radius) {
      k[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  return out;
}

}  // namespace nct
