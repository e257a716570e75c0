#pragma once

// Commutative ground truth: at theta = 0 an element is the trigonometric
// polynomial sum_k x_k exp(i k.xi) on the ordinary torus, and the trace is the
// normalised Haar integral, which the periodic trapezoidal rule computes
// exactly for trigonometric polynomials of degree below the grid size.

#include <functional>
#include <memory>
#include <vector>

#include "nct/element.hpp"

namespace nct::oracle {

/// Samples on the uniform grid xi = 2 pi (i_1, ..., i_n) / G, last axis fastest.
struct GridFunction {
  int dim = 0;
  int grid_size = 0;
  std::vector<Complex> values;
};

/// 4 r + 17: odd and comfortably above the Nyquist size of degree-r polynomials.
int default_grid_size(int support_radius);

/// Evaluates sum_k x_k exp(i k.xi) on the grid. Requires theta = 0.
GridFunction synthesize(const NcElement& x, int grid_size);

/// Discrete Fourier coefficients for |k|_inf <= radius (inverse of synthesize
/// when grid_size > 2 * radius).
NcElement analyze(const GridFunction& f, std::shared_ptr<const Theta> theta, int radius);

/// Grid mean of g applied to the (real) grid values.
double quad_trace(const GridFunction& f, const std::function<double(double)>& g);

/// quad_trace on grids of growing size (starting at default_grid_size, then
/// doubling) until successive estimates differ by less than tol * max(1, |estimate|).
double converged_quad_trace(const NcElement& x, const std::function<double(double)>& g,
                            double tol = 1e-9);

}  // namespace nct::oracle
