#include "nct/theta.hpp"

#include <algorithm>
#include <string>

#include "nct/random.hpp"

namespace nct {

Theta::Theta(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 2 || n > kMaxDim) {
    throw UsageError("Theta: dimension must lie in [2, " + std::to_string(kMaxDim) + "], got " +
                     std::to_string(n));
  }
  if (entries_.size() != static_cast<std::size_t>(n * n)) {
    throw UsageError("Theta: expected " + std::to_string(n * n) + " entries");
  }
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if ((*this)(j, k) != -(*this)(k, j)) {
        throw UsageError("Theta: matrix is not skew-symmetric at (" + std::to_string(j) + "," +
                         std::to_string(k) + ")");
      }
    }
  }
  is_zero_ = std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
}

Theta Theta::zero(int n) {
  return Theta(n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0));
}

Theta Theta::two_torus(double value) { return Theta(2, {0.0, value, -value, 0.0}); }

Theta Theta::random(int n, std::uint64_t seed) {
  if (n < 2 || n > kMaxDim) throw UsageError("Theta::random: bad dimension");
  Rng rng(seed);
  std::vector<double> e(static_cast<std::size_t>(n * n), 0.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double v = rng.uniform();
      e[static_cast<std::size_t>(j * n + k)] = v;
      e[static_cast<std::size_t>(k * n + j)] = -v;
    }
  }
  return Theta(n, std::move(e));
}

double Theta::upper_form(const MultiIndex& a, const MultiIndex& b) const noexcept {
  double acc = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (a[j] == 0) continue;
    for (int l = j + 1; l < n_; ++l) {
      acc += (*this)(j, l) * static_cast<double>(a[j]) * static_cast<double>(b[l]);
    }
  }
  return acc;
}

void Theta::require_dim(const MultiIndex& k) const {
  if (k.dim() != n_) {
    throw UsageError("index " + k.to_string() + " has length " + std::to_string(k.dim()) +
                     ", torus dimension is " + std::to_string(n_));
  }
}

}  // namespace nct
