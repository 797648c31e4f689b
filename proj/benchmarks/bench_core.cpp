#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "equilab/fuchsian.hpp"
#include "equilab/grid.hpp"
#include "equilab/measures.hpp"
#include "equilab/observables.hpp"
#include "equilab/ode.hpp"
#include "equilab/torus.hpp"
#include "equilab/translates.hpp"

using namespace equilab;

namespace {

std::shared_ptr<const fuchsian::FuchsianGroup> bolza() {
  static const auto g = std::make_shared<const fuchsian::FuchsianGroup>(fuchsian::FuchsianGroup::bolza());
  return g;
}

measures::Vec vec(std::initializer_list<double> xs) {
  measures::Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

void BM_ExpLie(benchmark::State& state) {
  const LieVector W{0.3, 0.8, -0.5};
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_lie(W, s));
    s += 1e-9;
  }
}
BENCHMARK(BM_ExpLie);

void BM_Reduce(benchmark::State& state) {
  const auto& grp = *bolza();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Sl2Element> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(from_iwasawa(2.0 * u(rng), std::exp(2.0 * u(rng)), u(rng)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(grp.reduce_fast(pts[i++ % pts.size()]));
}
BENCHMARK(BM_Reduce);

void BM_FlowReduce(benchmark::State& state) {
  const auto& grp = *bolza();
  const Sl2Element q = from_iwasawa(0.1, 1.3, 0.4);
  const double t = static_cast<double>(state.range(0));
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuchsian::flow_reduce(grp, q * exp_lie(lie::Theta, s), t));
    s += 1e-3;
  }
}
BENCHMARK(BM_FlowReduce)->Arg(4)->Arg(12);

void BM_SphereFourier(benchmark::State& state) {
  const auto m = measures::Measure::sphere(vec({0.0, 0.0, 0.0}), 0.3);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(measures::fourier_transform(m, t * vec({0.6, 0.0, 0.8})));
}
BENCHMARK(BM_SphereFourier)->Arg(10)->Arg(1000);

void BM_CircleDiscrepancy(benchmark::State& state) {
  const auto m = measures::Measure::circle(vec({0.1, 0.2}), 0.3);
  const auto lat = torus::TorusLattice::standard(2);
  const auto dil = torus::DilationFamily::homothety(2);
  torus::IVec k(2);
  k << 2, 1;
  const auto f = torus::TorusObservable::cosine(k);
  for (auto _ : state) benchmark::DoNotOptimize(torus::discrepancy_series(m, lat, dil, f, 500.0));
}
BENCHMARK(BM_CircleDiscrepancy);

void BM_BolzaTranslate(benchmark::State& state) {
  BumpSpec a;
  a.center = UpperHalfPoint(0.2, 1.1);
  a.radius = 2.0;
  const BundleObservable f(bolza(), {a});
  translates::TranslateConfig cfg;
  cfg.group = bolza();
  cfg.sigma = std::numbers::pi;
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(translates::translate_average(cfg, f, t));
}
BENCHMARK(BM_BolzaTranslate)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExtractCoefficients(benchmark::State& state) {
  const auto prob = ode::OdeProblem::make(
      0.6, 0.0, 1.0, [](double t) { return std::complex<double>(std::cos(2.0 * t), std::sin(t)); }, {0.4, -0.2},
      {-0.1, 0.3});
  for (auto _ : state) benchmark::DoNotOptimize(ode::extract_coefficients(prob));
}
BENCHMARK(BM_ExtractCoefficients)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
