#include "nct/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nct::oracle {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 22;

std::size_t grid_points(int dim, int g) {
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(g);
  return total;
}

// table[(k + r) * g + i] = exp(i k 2 pi i / g)
std::vector<Complex> axis_table(int radius, int g) {
  std::vector<Complex> t(static_cast<std::size_t>((2 * radius + 1) * g));
  for (int k = -radius; k <= radius; ++k) {
    for (int i = 0; i < g; ++i) {
      // reduce k*i mod g so the angle stays in [0, 2 pi)
      const int r = ((k * i) % g + g) % g;
      t[static_cast<std::size_t>((k + radius) * g + i)] =
          std::polar(1.0, 2.0 * std::numbers::pi * r / g);
    }
  }
  return t;
}

}  // namespace

int default_grid_size(int support_radius) { return 4 * support_radius + 17; }

GridFunction synthesize(const NcElement& x, int grid_size) {
  if (!x.theta().is_zero()) throw UsageError("oracle::synthesize: requires theta = 0");
  if (grid_size < 1) throw UsageError("oracle::synthesize: grid size must be positive");
  const int n = x.dim();
  const int g = grid_size;
  const std::size_t total = grid_points(n, g);
  if (total > kMaxGridPoints) throw UsageError("oracle::synthesize: grid too large");
  const int r = x.support_radius();
  const auto table = axis_table(r, g);

  GridFunction out{n, g, std::vector<Complex>(total, 0.0)};
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (int a = n - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(g));
      rem /= static_cast<std::size_t>(g);
    }
    Complex acc = 0.0;
    for (const auto& [k, c] : x.coeffs()) {
      Complex term = c;
      for (int a = 0; a < n; ++a) {
        term *= table[static_cast<std::size_t>((k[a] + r) * g + idx[static_cast<std::size_t>(a)])];
      }
      acc += term;
    }
    out.values[p] = acc;
  }
  return out;
}

NcElement analyze(const GridFunction& f, std::shared_ptr<const Theta> theta, int radius) {
  if (!theta->is_zero() || theta->dim() != f.dim) {
    throw UsageError("oracle::analyze: requires a zero theta of matching dimension");
  }
  const int n = f.dim;
  const int g = f.grid_size;
  const auto table = axis_table(radius, g);
  const double norm = 1.0 / static_cast<double>(f.values.size());
  CoeffMap out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (const MultiIndex& k : cube_indices(n, radius)) {
    Complex acc = 0.0;
    for (std::size_t p = 0; p < f.values.size(); ++p) {
      std::size_t rem = p;
      Complex phase = 1.0;
      for (int a = n - 1; a >= 0; --a) {
        const int i = static_cast<int>(rem % static_cast<std::size_t>(g));
        rem /= static_cast<std::size_t>(g);
        phase *= std::conj(table[static_cast<std::size_t>((k[a] + radius) * g + i)]);
      }
      acc += f.values[p] * phase;
    }
    out.emplace(k, acc * norm);
  }
  return NcElement(std::move(theta), std::move(out));
}

double quad_trace(const GridFunction& f, const std::function<double(double)>& g) {
  if (f.values.empty()) throw UsageError("oracle::quad_trace: empty grid");
  double acc = 0.0;
  for (const Complex& v : f.values) {
    if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
      throw UsageError("oracle::quad_trace: grid values are not real (element not selfadjoint)");
    }
    const double gv = g(v.real());
    if (!std::isfinite(gv)) {
      throw std::domain_error("oracle::quad_trace: integrand not finite at value " +
                              std::to_string(v.real()));
    }
    acc += gv;
  }
  return acc / static_cast<double>(f.values.size());
}

double converged_quad_trace(const NcElement& x, const std::function<double(double)>& g,
                            double tol) {
  int size = default_grid_size(x.support_radius());
  double prev = quad_trace(synthesize(x, size), g);
  while (true) {
    size *= 2;
    if (grid_points(x.dim(), size) > kMaxGridPoints) {
      throw std::runtime_error("oracle::converged_quad_trace: no convergence below grid cap");
    }
    const double next = quad_trace(synthesize(x, size), g);
    if (std::abs(next - prev) < tol * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
}

}  // namespace nct::oracle
