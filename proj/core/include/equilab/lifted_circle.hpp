#pragma once

#include <cstdint>

#include "equilab/torus.hpp"

namespace equilab::torus {

/// Discrepancy on T³ of the curve u ↦ (cos 2πu, sin 2πu, u) under (x, y, z) ↦ (tx, ty, z):
/// Σ_{N≠0} f̂(N) ν̂(-tN₁, -tN₂, -N₃). Terms with N₁ = N₂ = 0 vanish and are skipped.
cplx lifted_circle_discrepancy(const TorusObservable& f, double t, const measures::Quadrature& q = {});

MonteCarloEstimate lifted_circle_monte_carlo(const TorusObservable& f, double t, std::size_t n,
                                             std::uint64_t seed);

RateFit lifted_circle_rate_fit(const TorusObservable& f, const std::vector<double>& t_grid,
                               const RateFitOptions& opt = {});

}  // namespace equilab::torus
