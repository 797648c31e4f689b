#include <cmath>
#include <numbers>
#include <random>

#include "equilab/error.hpp"
#include "equilab/lifted_circle.hpp"
#include "equilab/parallel.hpp"

namespace equilab::torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_observable(const TorusObservable& f) {
  if (f.dim() != 3) throw ValidationError("lifted circle: observable must live on Z^3");
}

}  // namespace

cplx lifted_circle_discrepancy(const TorusObservable& f, double t, const measures::Quadrature& q) {
  check_observable(f);
  if (!(t > 0.0)) throw ValidationError("lifted_circle_discrepancy: t must be positive");
  static const Measure nu = Measure::lifted_circle();
  cplx sum = 0.0;
  for (const auto& term : f.terms()) {
    if (term.k(0) == 0 && term.k(1) == 0) continue;  // includes N = 0; the rest vanish by orthogonality
    Vec xi(3);
    xi << -t * term.k(0), -t * term.k(1), -static_cast<double>(term.k(2));
    sum += term.coefficient * measures::fourier_transform(nu, measures::FourierQuery{xi, q}).value;
  }
  return sum;
}

MonteCarloEstimate lifted_circle_monte_carlo(const TorusObservable& f, double t, std::size_t n,
                                             std::uint64_t seed) {
  check_observable(f);
  if (n < 1000) throw ValidationError("lifted_circle_monte_carlo: n must be >= 1000");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const TorusLattice lat = TorusLattice::standard(3);
  const cplx f0 = f.constant_term();
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = unit(rng);
    Vec x(3);
    x << t * std::cos(kTwoPi * u), t * std::sin(kTwoPi * u), u;
    const cplx v = f.evaluate(lat, x) - f0;
    sum += v;
    sum_sq += std::norm(v);
  }
  const double nn = static_cast<double>(n);
  const cplx mean = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - std::norm(mean)) * nn / (nn - 1.0);
  return {mean, std::sqrt(var / nn), n};
}

RateFit lifted_circle_rate_fit(const TorusObservable& f, const std::vector<double>& t_grid,
                               const RateFitOptions& opt) {
  check_observable(f);
  validate_grid(t_grid, 2.0, "lifted_circle_rate_fit");
  double l1 = 0.0;
  for (const auto& term : f.terms())
    if (term.k(0) != 0 || term.k(1) != 0) l1 += std::abs(term.coefficient);
  if (l1 == 0.0) throw ValidationError("lifted_circle_rate_fit: observable has no (N1, N2) != 0 terms");
  auto disc = parallel_map(t_grid.size(), opt.jobs,
                           [&](std::size_t i) { return lifted_circle_discrepancy(f, t_grid[i]); });
  return summarize_rate(t_grid, std::move(disc), l1, opt);
}

}  // namespace equilab::torus
