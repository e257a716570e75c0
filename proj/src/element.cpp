#include "nct/element.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "nct/random.hpp"

namespace nct {

NcElement::NcElement(std::shared_ptr<const Theta> theta, CoeffMap coeffs)
    : theta_(std::move(theta)), coeffs_(std::move(coeffs)) {
  if (!theta_) throw UsageError("NcElement: null theta");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    theta_->require_dim(it->first);
    const Complex c = it->second;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw UsageError("NcElement: non-finite coefficient at " + it->first.to_string());
    }
    if (c == Complex(0.0, 0.0)) {
      it = coeffs_.erase(it);
      continue;
    }
    support_radius_ = std::max(support_radius_, it->first.inf_norm());
    ++it;
  }
}

NcElement NcElement::zero(std::shared_ptr<const Theta> theta) {
  return NcElement(std::move(theta), {});
}

NcElement NcElement::scalar(std::shared_ptr<const Theta> theta, Complex c) {
  const int n = theta->dim();
  return basis(std::move(theta), MultiIndex::zero(n), c);
}

NcElement NcElement::basis(std::shared_ptr<const Theta> theta, const MultiIndex& k, Complex c) {
  CoeffMap m;
  m.emplace(k, c);
  return NcElement(std::move(theta), std::move(m));
}

Complex NcElement::coeff(const MultiIndex& k) const {
  theta_->require_dim(k);
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

void NcElement::require_same_theta(const NcElement& other) const {
  if (theta_ != other.theta_ && !(*theta_ == *other.theta_)) {
    throw UsageError("elements belong to different noncommutative tori");
  }
}

Complex unit_phase(double turns) {
  const double frac = turns - std::nearbyint(turns);
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

// Normal-ordering U_1^{k_1}..U_n^{k_n} U_1^{m_1}..U_n^{m_n} moves every U_j^{m_j}
// left across U_l^{k_l} for l > j, picking up exp(2 pi i theta(j,l) m_j k_l).
Complex structure_phase(const Theta& theta, const MultiIndex& k, const MultiIndex& m) {
  theta.require_dim(k);
  theta.require_dim(m);
  if (theta.is_zero()) return 1.0;
  return unit_phase(theta.upper_form(m, k));
}

// (U^k)^* = U_n^{-k_n}..U_1^{-k_1}; reversing the word back to increasing order
// gives exp(2 pi i sum_{j<l} theta(j,l) k_j k_l).
Complex adjoint_phase(const Theta& theta, const MultiIndex& k) {
  theta.require_dim(k);
  if (theta.is_zero()) return 1.0;
  return unit_phase(theta.upper_form(k, k));
}

NcElement multiply(const NcElement& x, const NcElement& y) {
  x.require_same_theta(y);
  const Theta& th = x.theta();
  CoeffMap out;
  for (const auto& [k, xk] : x.coeffs()) {
    for (const auto& [m, ym] : y.coeffs()) {
      out[k + m] += xk * ym * structure_phase(th, k, m);
    }
  }
  return NcElement(x.theta_ptr(), std::move(out));
}

NcElement involution(const NcElement& x) {
  CoeffMap out;
  for (const auto& [k, xk] : x.coeffs()) {
    out.emplace(-k, std::conj(xk) * adjoint_phase(x.theta(), k));
  }
  return NcElement(x.theta_ptr(), std::move(out));
}

Complex trace(const NcElement& x) { return x.coeff(MultiIndex::zero(x.dim())); }

Complex inner_product(const NcElement& x, const NcElement& y) {
  x.require_same_theta(y);
  Complex acc = 0.0;
  for (const auto& [k, xk] : x.coeffs()) {
    const auto it = y.coeffs().find(k);
    if (it != y.coeffs().end()) acc += xk * std::conj(it->second);
  }
  return acc;
}

NcElement apply_action(const NcElement& x, const std::vector<double>& s) {
  if (static_cast<int>(s.size()) != x.dim()) {
    throw UsageError("apply_action: action vector has length " + std::to_string(s.size()) +
                     ", torus dimension is " + std::to_string(x.dim()));
  }
  CoeffMap out;
  for (const auto& [k, xk] : x.coeffs()) {
    double dot = 0.0;
    for (int i = 0; i < x.dim(); ++i) dot += s[static_cast<std::size_t>(i)] * k[i];
    out.emplace(k, xk * Complex(std::cos(dot), std::sin(dot)));
  }
  return NcElement(x.theta_ptr(), std::move(out));
}

NcElement derivation(const NcElement& x, int j) {
  if (j < 1 || j > x.dim()) {
    throw UsageError("derivation: axis " + std::to_string(j) + " outside [1, " +
                     std::to_string(x.dim()) + "]");
  }
  CoeffMap out;
  for (const auto& [k, xk] : x.coeffs()) {
    out.emplace(k, Complex(0.0, static_cast<double>(k[j - 1])) * xk);
  }
  return NcElement(x.theta_ptr(), std::move(out));
}

NcElement add(const NcElement& x, const NcElement& y) {
  x.require_same_theta(y);
  CoeffMap out = x.coeffs();
  for (const auto& [k, yk] : y.coeffs()) out[k] += yk;
  return NcElement(x.theta_ptr(), std::move(out));
}

NcElement subtract(const NcElement& x, const NcElement& y) { return add(x, scale(y, -1.0)); }

NcElement scale(const NcElement& x, Complex c) {
  CoeffMap out;
  for (const auto& [k, xk] : x.coeffs()) out.emplace(k, c * xk);
  return NcElement(x.theta_ptr(), std::move(out));
}

double max_coeff_distance(const NcElement& x, const NcElement& y) {
  x.require_same_theta(y);
  double d = 0.0;
  for (const auto& [k, xk] : x.coeffs()) d = std::max(d, std::abs(xk - y.coeff(k)));
  for (const auto& [k, yk] : y.coeffs()) {
    if (!x.coeffs().contains(k)) d = std::max(d, std::abs(yk));
  }
  return d;
}

bool approx_equal(const NcElement& x, const NcElement& y, double tol) {
  return max_coeff_distance(x, y) <= tol;
}

bool is_selfadjoint(const NcElement& x, double tol) { return approx_equal(involution(x), x, tol); }

NcElement random_selfadjoint(std::shared_ptr<const Theta> theta, int radius, double decay,
                             std::uint64_t seed) {
  if (radius < 0) throw UsageError("random_selfadjoint: radius must be >= 0");
  if (!(decay > 0.0)) throw UsageError("random_selfadjoint: decay must be > 0");
  const int n = theta->dim();
  Rng rng(seed);
  CoeffMap out;
  for (const MultiIndex& k : cube_indices(n, radius)) {
    const double weight = std::pow(1.0 + k.norm_sq(), -decay);
    if (k.is_zero()) {
      out.emplace(k, Complex(rng.uniform(-1.0, 1.0) * weight, 0.0));
    } else if (k.is_positive_half()) {
      const double r = std::sqrt(rng.uniform());
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      const Complex c = std::polar(r * weight, phi);
      out.emplace(k, c);
      out.emplace(-k, std::conj(c) * adjoint_phase(*theta, k));
    }
  }
  return NcElement(std::move(theta), std::move(out));
}

nlohmann::json to_json(const NcElement& x) {
  nlohmann::json th = nlohmann::json::array();
  const int n = x.dim();
  for (int j = 0; j < n; ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < n; ++k) row.push_back(x.theta()(j, k));
    th.push_back(std::move(row));
  }
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [k, c] : x.coeffs()) {
    nlohmann::json idx = nlohmann::json::array();
    for (int i = 0; i < n; ++i) idx.push_back(k[i]);
    coeffs.push_back({std::move(idx), c.real(), c.imag()});
  }
  return {{"theta", std::move(th)}, {"coeffs", std::move(coeffs)}};
}

NcElement element_from_json(const nlohmann::json& j) {
  const auto& th = j.at("theta");
  const int n = static_cast<int>(th.size());
  std::vector<double> entries;
  for (const auto& row : th) {
    if (static_cast<int>(row.size()) != n) throw UsageError("theta must be square");
    for (const auto& v : row) entries.push_back(v.get<double>());
  }
  auto theta = std::make_shared<const Theta>(n, std::move(entries));
  CoeffMap coeffs;
  for (const auto& item : j.at("coeffs")) {
    const auto& idx = item.at(0);
    if (static_cast<int>(idx.size()) != n) throw UsageError("coefficient index length mismatch");
    MultiIndex k(n);
    for (int i = 0; i < n; ++i) k[i] = idx.at(static_cast<std::size_t>(i)).get<int>();
    coeffs[k] += Complex(item.at(1).get<double>(), item.at(2).get<double>());
  }
  return NcElement(std::move(theta), std::move(coeffs));
}

}  // namespace nct
