#include "equilab/grid.hpp"

#include <cmath>

#include "equilab/error.hpp"

namespace equilab {

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("logspace: endpoints must be positive");
  auto exps = linspace(std::log(a), std::log(b), n);
  for (auto& e : exps) e = std::exp(e);
  if (n >= 1) exps.front() = a;
  if (n >= 2) exps.back() = b;
  return exps;
}

}  // namespace equilab
