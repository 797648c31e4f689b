#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "equilab/error.hpp"
#include "equilab/fit.hpp"
#include "equilab/grid.hpp"
#include "equilab/parallel.hpp"
#include "equilab/quadrature.hpp"

using namespace equilab;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int n : {1, 2, 5, 8, 20, 33}) {
    const auto& rule = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += rule.weights[k] * std::pow(rule.nodes[k], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(sum, exact, 1e-14) << "n=" << n << " p=" << p;
    }
  }
}

TEST(Adaptive, SmoothAndPeakedIntegrands) {
  const auto r = integrate_adaptive([](double x) { return cplx(std::exp(x), std::sin(x)); }, 0.0, 2.0);
  EXPECT_NEAR(r.value.real(), std::exp(2.0) - 1.0, 1e-12);
  EXPECT_NEAR(r.value.imag(), 1.0 - std::cos(2.0), 1e-12);
  const auto p = integrate_adaptive([](double x) { return cplx(1.0 / (1e-4 + x * x), 0.0); }, -1.0, 1.0);
  EXPECT_NEAR(p.value.real(), 2.0 / 1e-2 * std::atan(1.0 / 1e-2), 1e-8);
}

TEST(Oscillatory, MatchesClosedForm) {
  const double k = 800.0;
  auto f = [&](double x) { return std::polar(1.0, -k * x) * (1.0 + x); };
  const auto r = integrate_oscillatory(f, 0.0, 1.0, k);
  // ∫ (1+x) e^{-ikx} dx on [0,1].
  const cplx ik(0.0, k);
  const cplx e = std::exp(-ik);
  const cplx exact = (1.0 - 2.0 * e) / ik + (1.0 - e) / (ik * ik);
  EXPECT_LT(std::abs(r.value - exact), 1e-11);
}

TEST(Oscillatory, PanelCapRaises) {
  OscillatoryOptions opt;
  opt.max_panels = 8;
  EXPECT_THROW(integrate_oscillatory([](double x) { return std::polar(1.0, 1e5 * x); }, 0.0, 1.0, 1e5, opt),
               UnsupportedFrequency);
}

TEST(Periodic, SpectralAccuracy) {
  const auto r = integrate_periodic(
      [](double u) { return cplx(std::exp(std::cos(2.0 * std::numbers::pi * u)), 0.0); }, 8, 1e-14);
  EXPECT_NEAR(r.value.real(), std::cyl_bessel_i(0.0, 1.0), 1e-14);
}

TEST(Fit, LineAndPowerLaw) {
  const auto t = logspace(1.0, 1000.0, 40);
  std::vector<double> m;
  for (double x : t) m.push_back(2.5 * std::pow(x, -0.75));
  const auto fit = fit_decay(t, m, FitAxis::LogLog);
  EXPECT_NEAR(fit.slope, -0.75, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(2.5), 1e-12);
  EXPECT_LT(fit.residual_rms, 1e-12);
  EXPECT_EQ(fit.window.mode, "raw");
  EXPECT_EQ(fit.window.n_points, 40u);
}

TEST(Fit, EnvelopeChosenForOscillatingSeries) {
  const auto t = logspace(10.0, 1000.0, 400);
  std::vector<double> m;
  for (double x : t) m.push_back(std::abs(std::cos(x)) * std::pow(x, -0.5));
  const auto fit = fit_decay(t, m, FitAxis::LogLog);
  EXPECT_EQ(fit.window.mode, "envelope");
  EXPECT_TRUE(fit.window.oscillation_detected);
  EXPECT_NEAR(fit.slope, -0.5, 0.05);
}

TEST(Fit, LogLinearExponential) {
  const auto t = linspace(2.0, 14.0, 49);
  std::vector<double> m;
  for (double x : t) m.push_back(3.0 * std::exp(-0.5 * x));
  const auto fit = fit_decay(t, m, FitAxis::LogLinear);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
}

TEST(Fit, DegenerateInputsRaise) {
  EXPECT_THROW(fit_decay({1.0, 2.0, 3.0}, {1e-14, 0.0, 1e-15}, FitAxis::LogLog), DegenerateFit);
  EXPECT_THROW(least_squares_line({1.0, 1.0}, {2.0, 3.0}), DegenerateFit);
}

TEST(Windowed, MaxAndMin) {
  const std::vector<double> v{1, 5, 2, 0, 3, 1};
  EXPECT_EQ(windowed_max(v, 3), (std::vector<double>{5, 5, 5, 3, 3, 3}));
  EXPECT_EQ(windowed_min(v, 3), (std::vector<double>{1, 1, 0, 0, 0, 1}));
}

TEST(Parallel, MapPreservesOrderAndPropagatesErrors) {
  const auto out = parallel_map(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw NumericalError("boom");
                            }),
               NumericalError);
}
