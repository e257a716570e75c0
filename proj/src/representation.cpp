#include "nct/representation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace nct {

TruncationBox::TruncationBox(int dim, int radius)
    : dim_(dim), radius_(radius), indices_(cube_indices(dim, radius)) {
  if (radius < 0) throw UsageError("TruncationBox: radius must be >= 0");
}

std::size_t TruncationBox::position(const MultiIndex& k) const {
  if (k.dim() != dim_ || !contains(k)) {
    throw UsageError("TruncationBox: index " + k.to_string() + " outside box of radius " +
                     std::to_string(radius_));
  }
  std::size_t pos = 0;
  const auto s = static_cast<std::size_t>(side());
  for (int i = 0; i < dim_; ++i) pos = pos * s + static_cast<std::size_t>(k[i] + radius_);
  return pos;
}

namespace {

double box_size(int dim, int radius) { return std::pow(2.0 * radius + 1.0, dim); }

}  // namespace

TruncationBox default_box(int dim, int support_radius, std::size_t cap) {
  const int r = support_radius;
  if (box_size(dim, r) > static_cast<double>(cap)) {
    throw TruncationError("default_box: even a box of radius " + std::to_string(r) +
                          " exceeds the matrix cap " + std::to_string(cap));
  }
  int radius = std::max(3 * r, r + 8);
  while (radius > r && box_size(dim, radius) > static_cast<double>(cap)) --radius;
  return TruncationBox(dim, radius);
}

TruncationBox default_box(const NcElement& x, std::size_t cap) {
  return default_box(x.dim(), x.support_radius(), cap);
}

GnsOperator left_regular_matrix(const NcElement& x, const TruncationBox& box, std::size_t cap) {
  if (box.dim() != x.dim()) throw UsageError("left_regular_matrix: box dimension mismatch");
  if (box.radius() < x.support_radius()) {
    throw TruncationError("left_regular_matrix: box radius " + std::to_string(box.radius()) +
                          " is below the support radius " + std::to_string(x.support_radius()));
  }
  if (box.size() > cap) {
    throw TruncationError("left_regular_matrix: matrix side " + std::to_string(box.size()) +
                          " exceeds cap " + std::to_string(cap));
  }
  const auto side = static_cast<Eigen::Index>(box.size());
  GnsOperator op{box, Eigen::MatrixXcd::Zero(side, side), {}, {}};
  const Theta& th = x.theta();
  for (std::size_t col = 0; col < box.size(); ++col) {
    const MultiIndex& k = box.index(col);
    for (const auto& [d, xd] : x.coeffs()) {
      const MultiIndex m = k + d;
      if (!box.contains(m)) continue;
      op.matrix(static_cast<Eigen::Index>(box.position(m)), static_cast<Eigen::Index>(col)) =
          xd * structure_phase(th, d, k);
    }
  }
  return op;
}

double hermitian_defect(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

GnsOperator eigendecompose(GnsOperator op) {
  const double scale = std::max(1.0, op.matrix.size() ? op.matrix.cwiseAbs().maxCoeff() : 0.0);
  const double defect = hermitian_defect(op.matrix);
  if (defect > 1e-10 * scale) {
    throw UsageError("eigendecompose: matrix is not Hermitian (defect " + std::to_string(defect) +
                     ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecompose: eigensolver did not converge");
  }
  op.eigenvalues = solver.eigenvalues();
  op.eigenvectors = solver.eigenvectors();
  return op;
}

SpectralFunction::SpectralFunction(Kind kind, double exponent, double floor)
    : kind_(kind), exponent_(exponent), floor_(floor) {
  if (!std::isfinite(exponent)) throw UsageError("SpectralFunction: non-finite exponent");
  if (requires_positivity() && !(floor > 0.0)) {
    throw UsageError("SpectralFunction: domain floor must be positive for this function");
  }
}

bool SpectralFunction::requires_positivity() const noexcept {
  switch (kind_) {
    case Kind::kLog:
      return true;
    case Kind::kPower:
      return exponent_ < 0.0 || exponent_ != std::floor(exponent_);
    default:
      return false;
  }
}

double SpectralFunction::operator()(double lambda) const {
  switch (kind_) {
    case Kind::kLog:
      return std::log(lambda);
    case Kind::kPower:
      return std::pow(lambda, exponent_);
    case Kind::kExp:
      return std::exp(lambda);
    case Kind::kAbsPower:
      return std::pow(std::abs(lambda), exponent_);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double SpectralMeasure::min_node() const {
  if (nodes.empty()) throw UsageError("SpectralMeasure: empty");
  return *std::min_element(nodes.begin(), nodes.end());
}

double SpectralMeasure::max_node() const {
  if (nodes.empty()) throw UsageError("SpectralMeasure: empty");
  return *std::max_element(nodes.begin(), nodes.end());
}

double SpectralMeasure::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

SpectralMeasure SpectralMeasure::mapped(const std::function<double(double)>& g) const {
  SpectralMeasure out{{}, weights};
  out.nodes.reserve(nodes.size());
  for (double v : nodes) out.nodes.push_back(g(v));
  return out;
}

namespace {

// Implicit QL on the symmetric tridiagonal (d, e) with e[i] coupling i and i+1.
// On return d holds eigenvalues and z[j] the first component of eigenvector j.
void implicit_ql_first_row(std::vector<double>& d, std::vector<double> e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.resize(static_cast<std::size_t>(n), 0.0);
  z.assign(static_cast<std::size_t>(n), 0.0);
  z[0] = 1.0;
  const double eps = std::numeric_limits<double>::epsilon();
  auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
  auto E = [&](int i) -> double& { return e[static_cast<std::size_t>(i)]; };
  auto Z = [&](int i) -> double& { return z[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(D(m)) + std::abs(D(m + 1));
        if (std::abs(E(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 100) throw std::runtime_error("spectral_measure: QL iteration did not converge");
      double g = (D(l + 1) - D(l)) / (2.0 * E(l));
      double r = std::hypot(g, 1.0);
      g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (int i = m - 1; i >= l; --i) {
        const double f = s * E(i);
        const double b = c * E(i);
        r = std::hypot(f, g);
        E(i + 1) = r;
        if (r == 0.0) {
          D(i + 1) -= p;
          E(m) = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = D(i + 1) - p;
        r = (D(i) - g) * s + 2.0 * c * b;
        p = s * r;
        D(i + 1) = g + p;
        g = c * r - b;
        const double fz = Z(i + 1);
        Z(i + 1) = s * Z(i) + c * fz;
        Z(i) = c * Z(i) - s * fz;
      }
      if (deflated) continue;
      D(l) -= p;
      E(l) = g;
      E(m) = 0.0;
    } while (m != l);
  }
}

}  // namespace

SpectralMeasure spectral_measure(const GnsOperator& op) {
  const std::size_t origin = op.box.origin();
  const auto n = static_cast<std::size_t>(op.matrix.rows());
  SpectralMeasure mu;
  if (op.decomposed()) {
    mu.nodes.assign(op.eigenvalues.data(), op.eigenvalues.data() + n);
    mu.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      mu.weights[j] = std::norm(op.eigenvectors(static_cast<Eigen::Index>(origin),
                                                static_cast<Eigen::Index>(j)));
    }
    return mu;
  }
  const double scale = std::max(1.0, n ? op.matrix.cwiseAbs().maxCoeff() : 0.0);
  if (hermitian_defect(op.matrix) > 1e-10 * scale) {
    throw UsageError("spectral_measure: matrix is not Hermitian");
  }
  if (n == 1) {
    return {{op.matrix(0, 0).real()}, {1.0}};
  }
  Eigen::MatrixXcd a = op.matrix;
  if (origin != 0) {
    const auto o = static_cast<Eigen::Index>(origin);
    a.row(0).swap(a.row(o));
    a.col(0).swap(a.col(o));
  }
  // Householder reflections act on indices >= 1, so the first basis vector
  // (now U^0) is fixed by the orthogonal change of basis.
  Eigen::Tridiagonalization<Eigen::MatrixXcd> tri(a);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  std::vector<double> d(diag.data(), diag.data() + diag.size());
  std::vector<double> e(sub.data(), sub.data() + sub.size());
  std::vector<double> z;
  implicit_ql_first_row(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  mu.nodes.reserve(n);
  mu.weights.reserve(n);
  for (std::size_t i : order) {
    mu.nodes.push_back(d[i]);
    mu.weights.push_back(z[i] * z[i]);
  }
  return mu;
}

SpectralMeasure spectral_measure(const NcElement& x, const TruncationBox& box) {
  return spectral_measure(left_regular_matrix(x, box));
}

void require_positive(const SpectralMeasure& mu, double floor, const char* context) {
  const double lo = mu.min_node();
  if (!(lo > floor)) {
    throw PositivityError(std::string(context) + ": spectrum reaches " + std::to_string(lo) +
                              ", below the admissible floor " + std::to_string(floor),
                          lo);
  }
}

NcElement functional_calculus(const GnsOperator& decomposed, const NcElement& x,
                              const std::function<double(double)>& f,
                              TruncationDiagnostics* diag) {
  if (!decomposed.decomposed()) throw UsageError("functional_calculus: operator not decomposed");
  const TruncationBox& box = decomposed.box;
  const auto o = static_cast<Eigen::Index>(box.origin());
  const auto& v = decomposed.eigenvectors;
  Eigen::VectorXcd w(v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    w(j) = f(decomposed.eigenvalues(j)) * std::conj(v(o, j));
  }
  const Eigen::VectorXcd column = v * w;

  CoeffMap out;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Complex c = column(static_cast<Eigen::Index>(i));
    const double m2 = std::norm(c);
    total += m2;
    if (2 * box.index(i).inf_norm() > box.radius()) tail += m2;
    out.emplace(box.index(i), c);
  }
  if (diag) {
    diag->tail_mass = std::sqrt(tail);
    diag->warning = diag->tail_mass > 1e-10 * std::sqrt(total);
  }
  return NcElement(x.theta_ptr(), std::move(out));
}

NcElement functional_calculus(const NcElement& x, const SpectralFunction& f,
                              const TruncationBox& box, TruncationDiagnostics* diag) {
  const GnsOperator op = eigendecompose(left_regular_matrix(x, box));
  if (f.requires_positivity()) {
    const double lo = op.eigenvalues.size() ? op.eigenvalues(0) : 0.0;
    if (!(lo > f.domain_floor())) {
      throw PositivityError("functional_calculus: spectrum reaches " + std::to_string(lo) +
                                ", below the domain floor " + std::to_string(f.domain_floor()),
                            lo);
    }
  }
  return functional_calculus(op, x, [&f](double v) { return f(v); }, diag);
}

double trace_of_function(const NcElement& x, const SpectralFunction& f,
                         const TruncationBox& box) {
  const SpectralMeasure mu = spectral_measure(x, box);
  if (f.requires_positivity()) require_positive(mu, f.domain_floor(), "trace_of_function");
  return mu.integrate([&f](double v) { return f(v); });
}

PositivityReport strict_positivity_check(const NcElement& x, const TruncationBox& box,
                                         double margin) {
  double scale = 1.0;
  for (const auto& [k, c] : x.coeffs()) scale = std::max(scale, std::abs(c));
  if (!is_selfadjoint(x, 1e-10 * scale)) {
    throw UsageError("strict_positivity_check: element is not selfadjoint");
  }
  const SpectralMeasure mu = spectral_measure(x, box);
  const double lo = mu.min_node();
  return {lo >= margin, lo};
}

}  // namespace nct
