#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace equilab {

using cplx = std::complex<double>;
using ComplexIntegrand = std::function<cplx(double)>;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (order >= 1).
const GaussLegendreRule& gauss_legendre(int order);

/// Fixed composite Gauss-Legendre rule: `panels` equal panels of `order` nodes.
cplx composite_gauss_legendre(const ComplexIntegrand& f, double a, double b, std::size_t panels,
                              int order);

struct QuadratureResult {
  cplx value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand.
/// Throws NumericalError when the interval budget is exhausted before reaching tolerance.
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    double abs_tol = 1e-13, double rel_tol = 1e-12,
                                    std::size_t max_intervals = 20000);

struct OscillatoryOptions {
  int order = 20;
  double tolerance = 1e-11;
  std::size_t max_panels = 1u << 16;
};

/// Composite Gauss-Legendre with panel doubling; the starting panel count follows from a bound
/// on the total phase variation over [a, b]. Throws UnsupportedFrequency past the panel cap.
QuadratureResult integrate_oscillatory(const ComplexIntegrand& f, double a, double b,
                                       double phase_variation, const OscillatoryOptions& opt = {});

/// Trapezoid rule for a 1-periodic integrand on [0, 1] with doubling until two successive sums
/// agree. Throws UnsupportedFrequency past the node cap.
QuadratureResult integrate_periodic(const ComplexIntegrand& f, std::size_t initial_nodes,
                                    double tolerance, std::size_t max_nodes = 1u << 20);

}  // namespace equilab
