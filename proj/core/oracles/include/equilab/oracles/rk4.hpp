#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace equilab::oracles {

using cplx = std::complex<double>;

struct Rk4Options {
  double tolerance = 1e-10;  // local error per step, relative to max(1, |y|)
  double initial_step = 1e-3;
  double min_step = 1e-12;
  std::size_t max_steps = 10000000;
};

struct Rk4Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive classical RK4 with step doubling and Richardson extrapolation for
/// y'' + y' + μy = e^{-t} G(t), y(t0) = y0, y'(t0) = dy0. Returns y at each output time (ascending, ≥ t0).
std::vector<cplx> solve_damped_oscillator(double mu, const std::function<cplx(double)>& G, double t0, cplx y0,
                                          cplx dy0, const std::vector<double>& outputs, const Rk4Options& opt = {},
                                          Rk4Stats* stats = nullptr);

}  // namespace equilab::oracles
