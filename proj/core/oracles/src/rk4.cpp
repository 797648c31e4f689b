#include "equilab/oracles/rk4.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace equilab::oracles {

namespace {

using State = std::array<cplx, 2>;

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1]}; }

}  // namespace

std::vector<cplx> solve_damped_oscillator(double mu, const std::function<cplx(double)>& G, double t0, cplx y0,
                                          cplx dy0, const std::vector<double>& outputs, const Rk4Options& opt,
                                          Rk4Stats* stats) {
  auto rhs = [&](double t, const State& y) -> State { return {y[1], std::exp(-t) * G(t) - y[1] - mu * y[0]}; };
  auto step = [&](double t, const State& y, double h) {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(t + h, axpy(y, h, k3));
    return State{y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                 y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
  };

  std::vector<cplx> out;
  out.reserve(outputs.size());
  State y{y0, dy0};
  double t = t0, h = opt.initial_step;
  Rk4Stats local;
  for (double target : outputs) {
    if (target < t - 1e-15) throw std::invalid_argument("solve_damped_oscillator: output times must be ascending and >= t0");
    while (t < target) {
      if (local.accepted + local.rejected > opt.max_steps) throw std::runtime_error("solve_damped_oscillator: step budget exhausted");
      const double hh = std::min(h, target - t);
      const State full = step(t, y, hh);
      const State half = step(t + 0.5 * hh, step(t, y, 0.5 * hh), 0.5 * hh);
      const double scale = std::max({1.0, std::abs(half[0]), std::abs(half[1])});
      const double err = std::max(std::abs(half[0] - full[0]), std::abs(half[1] - full[1])) / 15.0 / scale;
      if (err <= opt.tolerance || hh <= opt.min_step) {
        y = {half[0] + (half[0] - full[0]) / 15.0, half[1] + (half[1] - full[1]) / 15.0};
        t = (hh == target - t) ? target : t + hh;
        ++local.accepted;
      } else {
        ++local.rejected;
      }
      const double factor = err > 0.0 ? 0.9 * std::pow(opt.tolerance / err, 0.2) : 5.0;
      h = std::clamp(hh * factor, opt.min_step, 1.0);
      if (h < hh * 0.1) h = hh * 0.1;
    }
    out.push_back(y[0]);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace equilab::oracles
