#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/lifted_circle.hpp"
#include "equilab/torus.hpp"

using namespace equilab;
using namespace equilab::torus;

namespace {

Vec v2(double a, double b) { Vec v(2); v << a, b; return v; }
IVec k2(int a, int b) { IVec v(2); v << a, b; return v; }
IVec k3(int a, int b, int c) { IVec v(3); v << a, b, c; return v; }

}  // namespace

TEST(TorusLattice, FractionalAndProject) {
  Mat b(2, 2);
  b << 2.0, 0.5, 0.0, 1.5;
  TorusLattice lat(b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-20, 20);
  for (int i = 0; i < 200; ++i) {
    Vec x = v2(u(rng), u(rng));
    Vec c = lat.fractional(x);
    EXPECT_GE(c.minCoeff(), 0.0);
    EXPECT_LT(c.maxCoeff(), 1.0);
    Vec n = lat.inverse() * (x - lat.project(x));
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(n(j), std::round(n(j)), 1e-10);
  }
  EXPECT_NEAR((lat.dual_basis().transpose() * lat.basis() - Mat::Identity(2, 2)).norm(), 0.0, 1e-14);
  EXPECT_THROW(TorusLattice(Mat::Zero(2, 2)), ValidationError);
}

TEST(TorusObservable, MergesAndChecksSymmetry) {
  auto f = TorusObservable::cosine(k2(1, 2), 2.0, 0.3) + TorusObservable::cosine(k2(1, 2), 1.0, 0.3);
  EXPECT_EQ(f.terms().size(), 2u);
  EXPECT_NEAR(f.l1_norm(), 3.0, 1e-14);
  EXPECT_TRUE(f.real_valued());
  EXPECT_THROW(TorusObservable({{k2(1, 0), 1.0}}, true), ValidationError);
  EXPECT_THROW(TorusObservable({{k2(1, 0), 1.0}, {k3(0, 1, 0), 1.0}}), ValidationError);
  auto lat = TorusLattice::standard(2);
  Vec x = v2(0.3, 0.7);
  EXPECT_NEAR(f.evaluate(lat, x).real(), 3.0 * std::cos(2 * std::numbers::pi * (0.3 + 1.4) + 0.3), 1e-12);
  EXPECT_NEAR(f.evaluate(lat, x).imag(), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f.evaluate(lat, x) - f.evaluate(lat, x + v2(3, -5))), 0.0, 1e-12);
}

TEST(DilationFamily, AppliesAffineMap) {
  DilationFamily dil(v2(0.5, 0.25), RotationPath::planar(0, 1, 0.3, 0.1), v2(0.1, 0.2), v2(0.01, 0.0));
  const double t = 3.0;
  const double a = 0.3 * t + 0.1;
  Vec x = v2(1.0, -2.0);
  Vec d = x - v2(0.5, 0.25);
  Vec expect = v2(0.5, 0.25) + t * v2(std::cos(a) * d(0) - std::sin(a) * d(1), std::sin(a) * d(0) + std::cos(a) * d(1)) +
               v2(0.1 + 0.01 * t, 0.2);
  EXPECT_NEAR((dil.apply(x, t) - expect).norm(), 0.0, 1e-13);
  Mat notorth(2, 2);
  notorth << 1, 1, 0, 1;
  EXPECT_THROW(RotationPath::constant(notorth), ValidationError);
}

// The exact series must agree with a direct Monte Carlo average of f over h_t-pushed samples.
TEST(Discrepancy, SeriesMatchesMonteCarlo) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Measure> measures = {Measure::circle(v2(0.3, 0.4), 0.7), Measure::segment(v2(0.8, 0.3)),
                                   Measure::graph({0.1, 0.5, -0.4}, 0.0, 1.0), Measure::ifs_preset("sierpinski")};
  Mat skew(2, 2);
  skew << 1.0, 0.4, 0.0, 1.3;
  std::vector<TorusLattice> lats = {TorusLattice::standard(2), TorusLattice(2.0 * Mat::Identity(2, 2)), TorusLattice(skew)};
  for (int trial = 0; trial < 12; ++trial) {
    const Measure& m = measures[trial % measures.size()];
    const TorusLattice& lat = lats[trial % lats.size()];
    DilationFamily dil(v2(u(rng), u(rng)), RotationPath::planar(0, 1, u(rng), u(rng)), v2(u(rng), u(rng)));
    auto f = TorusObservable::cosine(k2(1 + trial % 2, trial % 3 - 1), 1.0, u(rng)) +
             TorusObservable::character(k2(0, 1), cplx(0.3, -0.2)) + TorusObservable::character(k2(0, 0), 2.0);
    const double t = 1.0 + 6.0 * u(rng);
    const cplx series = discrepancy_series(m, lat, dil, f, t);
    const auto mc = discrepancy_monte_carlo(m, lat, dil, f, t, 200000, 100 + trial);
    EXPECT_LT(std::abs(series - mc.value), 5.0 * mc.standard_error + 1e-3) << "trial " << trial;
  }
}

TEST(Discrepancy, RotationAboutCircleCenterPreservesMagnitude) {
  const Vec c = v2(0.3, 0.6);
  auto m = Measure::circle(c, 0.45);
  auto lat = TorusLattice::standard(2);
  auto f = TorusObservable::character(k2(2, 1));
  DilationFamily plain(c, RotationPath::identity());
  DilationFamily spun(c, RotationPath::planar(0, 1, 1.7, 0.4));
  for (double t : {3.0, 17.0, 120.0})
    EXPECT_NEAR(std::abs(discrepancy_series(m, lat, plain, f, t)), std::abs(discrepancy_series(m, lat, spun, f, t)), 1e-10);
}

TEST(Discrepancy, ScaledLatticeMatchesRescaledMeasure) {
  // Pushing m by x ↦ 2x on (2Z)^2 is the same as m on Z^2.
  auto small = Measure::circle(v2(0.2, 0.1), 0.35);
  auto big = Measure::circle(v2(0.4, 0.2), 0.7);
  auto f = TorusObservable::cosine(k2(1, 3), 1.0, 0.2);
  DilationFamily d_small(v2(0.2, 0.1), RotationPath::identity());
  DilationFamily d_big(v2(0.4, 0.2), RotationPath::identity());
  for (double t : {2.0, 9.0, 40.0})
    EXPECT_NEAR(std::abs(discrepancy_series(small, TorusLattice::standard(2), d_small, f, t) -
                         discrepancy_series(big, TorusLattice(2.0 * Mat::Identity(2, 2)), d_big, f, t)),
                0.0, 1e-10);
}

TEST(Discrepancy, RejectsMismatchedDimensions) {
  auto m = Measure::circle(v2(0, 0), 1.0);
  EXPECT_THROW(discrepancy_series(m, TorusLattice::standard(3), DilationFamily::homothety(2),
                                  TorusObservable::character(k2(1, 0)), 1.0),
               ValidationError);
}

TEST(RayTest, SegmentStallsAlongOrthogonalRay) {
  auto m = Measure::segment(v2(1.0, 0.0));
  auto grid = logspace(1.0, 1000.0, 60);
  auto res = integral_ray_decay_test(m, TorusLattice::standard(2), {k2(0, 1), k2(1, 0), k2(1, 1)}, grid);
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(res[0].verdict, RayVerdict::Stalls);
  EXPECT_EQ(res[1].verdict, RayVerdict::Decays);
  EXPECT_EQ(res[2].verdict, RayVerdict::Decays);
}

TEST(RayTest, CircleDecaysOnEveryRay) {
  auto m = Measure::circle(v2(0.5, 0.5), 0.4);
  auto grid = logspace(1.0, 1000.0, 60);
  for (const auto& r : integral_ray_decay_test(m, TorusLattice::standard(2), {k2(1, 0), k2(2, -3)}, grid))
    EXPECT_NE(r.verdict, RayVerdict::Stalls);
}

TEST(RateFit, CircleSlopeAndInvariance) {
  auto grid = logspace(10.0, 1000.0, 160);
  auto f = TorusObservable::cosine(k2(1, 0)) + TorusObservable::cosine(k2(1, 2), 0.5, 1.0);
  double slopes[2];
  int i = 0;
  for (const Vec& c : {v2(0.5, 0.5), v2(0.13, 0.77)}) {
    auto fit = equidistribution_rate_fit(Measure::circle(c, 0.3), TorusLattice::standard(2),
                                         DilationFamily(c, RotationPath::planar(0, 1, 0.5, 0.0)), f, grid);
    EXPECT_NEAR(fit.fit.slope, -0.5, 0.1);
    EXPECT_GT(fit.constant, 0.0);
    EXPECT_LT(fit.constant, 10.0);
    slopes[i++] = fit.fit.slope;
  }
  EXPECT_NEAR(slopes[0], slopes[1], 0.05);
  EXPECT_THROW(equidistribution_rate_fit(Measure::circle(v2(0, 0), 1.0), TorusLattice::standard(2),
                                         DilationFamily::homothety(2), f, linspace(1.0, 10.0, 10)),
               ValidationError);
}

TEST(LiftedCircle, SeriesMatchesMonteCarloAndSkipsVerticalModes) {
  auto f = TorusObservable::cosine(k3(1, 0, 1)) + TorusObservable::cosine(k3(0, 1, -2), 0.7, 0.3) +
           TorusObservable::cosine(k3(0, 0, 1), 5.0);
  for (double t : {1.5, 4.0, 11.0}) {
    const cplx s = lifted_circle_discrepancy(f, t);
    const auto mc = lifted_circle_monte_carlo(f, t, 200000, 7);
    EXPECT_LT(std::abs(s - mc.value), 5.0 * mc.standard_error + 1e-3);
  }
  auto vertical = TorusObservable::cosine(k3(0, 0, 2));
  EXPECT_EQ(lifted_circle_discrepancy(vertical, 3.0), cplx(0.0));
  auto fit = lifted_circle_rate_fit(TorusObservable::cosine(k3(1, 0, 1)) + TorusObservable::cosine(k3(1, 1, 0)),
                                    logspace(10.0, 1000.0, 160));
  EXPECT_NEAR(fit.fit.slope, -0.5, 0.1);
}
