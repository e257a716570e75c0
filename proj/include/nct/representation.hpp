#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "nct/element.hpp"

namespace nct {

inline constexpr std::size_t kDefaultMatrixCap = 4096;
/// Minimum admissible eigenvalue for log and non-integer powers.
inline constexpr double kDefaultDomainFloor = 1e-10;
/// Positivity margin used when admitting samples into experiments.
inline constexpr double kDefaultPositivityMargin = 1e-8;

/// The index cube {k : |k|_inf <= radius} with a fixed enumeration
/// (lexicographic, last component fastest).
class TruncationBox {
 public:
  TruncationBox(int dim, int radius);

  int dim() const noexcept { return dim_; }
  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& index(std::size_t i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  bool contains(const MultiIndex& k) const noexcept { return k.inf_norm() <= radius_; }
  /// Position of k in the enumeration; k must lie in the box.
  std::size_t position(const MultiIndex& k) const;
  std::size_t origin() const { return position(MultiIndex::zero(dim_)); }

 private:
  int dim_;
  int radius_;
  std::vector<MultiIndex> indices_;
};

/// Default box for functional calculus on an element of support radius r:
/// radius max(3r, r + 8), shrunk (never below r) until the matrix side fits `cap`.
TruncationBox default_box(const NcElement& x, std::size_t cap = kDefaultMatrixCap);
/// Same policy from dimension and support radius alone.
TruncationBox default_box(int dim, int support_radius, std::size_t cap = kDefaultMatrixCap);

/// Left multiplication by an element, compressed to a truncation box.
struct GnsOperator {
  TruncationBox box;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd eigenvalues;    // ascending, filled by eigendecompose
  Eigen::MatrixXcd eigenvectors;  // columns, filled by eigendecompose

  bool decomposed() const noexcept { return eigenvalues.size() == matrix.rows(); }
};

/// Entry (m, k) = x_{m-k} * lambda(m-k, k) for m, k in the box.
GnsOperator left_regular_matrix(const NcElement& x, const TruncationBox& box,
                                std::size_t cap = kDefaultMatrixCap);

/// max |A - A^*| entrywise.
double hermitian_defect(const Eigen::MatrixXcd& a);

/// Dense Hermitian eigendecomposition; rejects matrices whose Hermitian defect exceeds 1e-10.
GnsOperator eigendecompose(GnsOperator op);

/// Scalar map applied on the spectrum.
class SpectralFunction {
 public:
  enum class Kind { kLog, kPower, kExp, kAbsPower };

  static SpectralFunction log(double domain_floor = kDefaultDomainFloor) {
    return {Kind::kLog, 0.0, domain_floor};
  }
  static SpectralFunction power(double alpha, double domain_floor = kDefaultDomainFloor) {
    return {Kind::kPower, alpha, domain_floor};
  }
  static SpectralFunction exp() { return {Kind::kExp, 0.0, 0.0}; }
  static SpectralFunction abs_power(double p) { return {Kind::kAbsPower, p, 0.0}; }

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  double domain_floor() const noexcept { return floor_; }
  /// log, negative powers and non-integer powers need a spectrum above the floor.
  bool requires_positivity() const noexcept;

  double operator()(double lambda) const;

 private:
  SpectralFunction(Kind kind, double exponent, double floor);

  Kind kind_;
  double exponent_;
  double floor_;
};

/// Discrete probability measure sum_j w_j delta_{lambda_j} representing the
/// vector state of the basis vector U^0 on a truncated operator, so that
/// tau(f(x)) ~ sum_j w_j f(lambda_j).
struct SpectralMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (weights[j] != 0.0) acc += weights[j] * f(nodes[j]);
    }
    return acc;
  }

  double min_node() const;
  double max_node() const;
  double total_weight() const;
  /// Push the measure forward through g (nodes_j -> g(nodes_j)).
  SpectralMeasure mapped(const std::function<double(double)>& g) const;
};

/// Spectral measure of the U^0 state. Without a stored decomposition this uses
/// Householder tridiagonalisation with U^0 as the first basis vector followed
/// by an implicit QL sweep that tracks only first eigenvector components.
SpectralMeasure spectral_measure(const GnsOperator& op);
SpectralMeasure spectral_measure(const NcElement& x, const TruncationBox& box);

struct TruncationDiagnostics {
  /// l2 mass of the result outside the inner half-box |k|_inf <= radius / 2.
  double tail_mass = 0.0;
  /// Set when the tail exceeds 1e-10 of the result norm.
  bool warning = false;
};

/// f(x) = V f(L) V^* applied to U^0; the resulting coefficient vector is the
/// Fourier expansion of f(x) restricted to the box.
NcElement functional_calculus(const NcElement& x, const SpectralFunction& f,
                              const TruncationBox& box, TruncationDiagnostics* diag = nullptr);
/// Same, reusing a decomposed operator.
NcElement functional_calculus(const GnsOperator& decomposed, const NcElement& x,
                              const std::function<double(double)>& f,
                              TruncationDiagnostics* diag = nullptr);

/// tau(f(x)) = sum_j f(lambda_j) |<v_j, U^0>|^2.
double trace_of_function(const NcElement& x, const SpectralFunction& f, const TruncationBox& box);

struct PositivityReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
};

/// Whether the truncated left-regular operator of a selfadjoint x has spectrum >= margin.
PositivityReport strict_positivity_check(const NcElement& x, const TruncationBox& box,
                                         double margin = kDefaultPositivityMargin);

/// Throws PositivityError unless every node of the measure exceeds floor.
void require_positive(const SpectralMeasure& mu, double floor, const char* context);

}  // namespace nct
