#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "equilab/error.hpp"
#include "equilab/fuchsian.hpp"
#include "equilab/grid.hpp"
#include "equilab/observables.hpp"
#include "equilab/quadrature.hpp"

using namespace equilab;
using namespace equilab::fuchsian;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const FuchsianGroup> bolza() {
  static auto g = std::make_shared<const FuchsianGroup>(FuchsianGroup::bolza());
  return g;
}

Sl2Element random_element(std::mt19937_64& rng, double max_dist) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return exp_lie(lie::Theta, 2 * kPi * u(rng)) * exp_lie(lie::X, max_dist * u(rng)) *
         exp_lie(lie::Theta, 2 * kPi * u(rng));
}

double max_entry_diff(const Sl2Element& a, const Sl2Element& b) {
  const Mat2 x = a.matrix(), y = b.matrix();
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

}  // namespace

TEST(Bolza, BuiltinMatchesShippedFile) {
  const auto file = FuchsianGroup::load(std::string(EQUILAB_DATA_DIR) + "/bolza.json");
  const auto& built = *bolza();
  ASSERT_EQ(file.generators().size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(max_entry_diff(file.generators()[k], built.generators()[k]), 1e-14);
  EXPECT_EQ(file.side_pairings().size(), 8u);
}

TEST(Bolza, OctagonGeometry) {
  // Regular octagon with angle π/4: cosh R = cot²(π/8), cosh r = cot(π/8), area 6π - 2π.
  const double cot = 1.0 / std::tan(kPi / 8);
  EXPECT_NEAR(bolza()->circumradius(), std::acosh(cot * cot), 1e-10);
  EXPECT_NEAR(bolza()->inradius(), std::acosh(cot), 1e-12);
  EXPECT_NEAR(bolza()->area(), 4 * kPi, 1e-9);
  for (double phi : linspace(-kPi, kPi, 33)) {
    EXPECT_GE(bolza()->boundary_radius(phi), bolza()->inradius() - 1e-12);
    EXPECT_LE(bolza()->boundary_radius(phi), bolza()->circumradius() + 1e-12);
  }
}

TEST(Bolza, ValidationRejectsBadGroups) {
  auto gens = bolza()->generators();
  EXPECT_THROW(FuchsianGroup(gens, {1, 2, 3, 4}), ValidationError);
  gens[0] = exp_lie(lie::Theta, 0.3);
  EXPECT_THROW(FuchsianGroup(gens, {}), ValidationError);
  nlohmann::json j = {{"generators", {{"1", "0", "0", "1"}}}, {"relator", {1}}, {"colour", "red"}};
  EXPECT_THROW(FuchsianGroup::from_json(j), ValidationError);
}

TEST(Reduce, IdentityAndInvariant) {
  const auto& grp = *bolza();
  const auto r0 = grp.reduce(Sl2Element());
  EXPECT_TRUE(r0.word.empty());
  EXPECT_LT(max_entry_diff(r0.g, Sl2Element()), 1e-15);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Sl2Element g = random_element(rng, 20.0);
    const auto r = grp.reduce(g);
    const double d = grp.distance(r.g);
    EXPECT_LE(d, grp.circumradius() + 1e-9);
    for (const auto& s : grp.side_pairings()) EXPECT_LE(d, grp.distance(s * r.g) + 1e-9);
    if (i % 50 == 0) {
      // word lists the pairings applied left-first, so the product is reversed
      std::vector<int> rev(r.word.rbegin(), r.word.rend());
      EXPECT_LT(hyperbolic_distance(base_point(grp.word_element(rev) * g), base_point(r.g)), 1e-7);
    }
  }
}

TEST(Reduce, CosetWellDefined) {
  const auto& grp = *bolza();
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int i = 0; i < 100; ++i) {
    const Sl2Element g = random_element(rng, 6.0);
    const Sl2Element gamma = grp.side_pairings()[pick(rng)] * grp.side_pairings()[pick(rng)];
    EXPECT_LT(hyperbolic_distance(base_point(grp.reduce(g).g), base_point(grp.reduce(gamma * g).g)), 1e-9);
  }
}

TEST(Shell, EnumeratesOrbitPoints) {
  const auto& grp = *bolza();
  const auto sh = grp.shell(4.0);
  ASSERT_FALSE(sh.empty());
  EXPECT_LT(max_entry_diff(sh.front(), Sl2Element()), 1e-15);
  for (const auto& g : sh) EXPECT_LE(grp.distance(g), 4.0 + 1e-12);
  for (const auto& s : grp.side_pairings()) {
    bool found = false;
    for (const auto& g : sh) found |= hyperbolic_distance(base_point(g), base_point(s)) < 1e-9;
    EXPECT_TRUE(found);
  }
  // Orbit counting: #{γ : d ≤ R} ~ area(B_R)/area(M) for large R.
  const auto big = grp.shell(7.0);
  const double expected = 2 * kPi * (std::cosh(7.0) - 1) / (4 * kPi);
  EXPECT_GT(big.size(), 0.7 * expected);
  EXPECT_LT(big.size(), 1.3 * expected);
}

TEST(GeodesicCircle, Properties) {
  const auto& grp = *bolza();
  const Sl2Element q = from_iwasawa(0.1, 1.3, 0.4);
  const auto s_grid = linspace(0.0, 2 * kPi, 9);
  const auto at0 = geodesic_circle_points(grp, q, 0.0, s_grid);
  for (const auto& p : at0) EXPECT_LT(hyperbolic_distance(base_point(p.g), base_point(at0[0].g)), 1e-9);
  const double t = 5.5;
  const auto pts = geodesic_circle_points(grp, q, t, s_grid);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const Sl2Element raw = q * exp_lie(lie::Theta, s_grid[i]) * exp_lie(lie::X, t);
    EXPECT_NEAR(hyperbolic_distance(base_point(raw), base_point(q)), t, 1e-9);
    EXPECT_LT(hyperbolic_distance(base_point(pts[i].gamma * raw), base_point(pts[i].g)), 1e-8);
    EXPECT_LE(grp.distance(pts[i].g), grp.circumradius() + 1e-9);
  }
  EXPECT_LT(hyperbolic_distance(base_point(pts.front().g), base_point(pts.back().g)), 1e-8);
}

TEST(Cells, MassesAndHaarSampling) {
  CellPartition cells(bolza());
  ASSERT_EQ(cells.cell_count(), 64);
  double total = 0.0;
  for (double m : cells.masses()) {
    EXPECT_NEAR(m, 1.0 / 64, 1e-10);
    total += m;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto pts = sample_haar(*bolza(), 200000, 3);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_LE(bolza()->distance(pts[i]), bolza()->circumradius() + 1e-12);
  EXPECT_LT(cells.total_variation(cells.histogram(pts)), 0.02);
}

TEST(BundleObservable, PeriodicAndCompact) {
  BumpSpec spec;
  spec.center = UpperHalfPoint(0.3, 1.2);
  spec.radius = 1.4;
  spec.fiber_angle = 0.5;
  BundleObservable f(bolza(), {spec});
  BundleObservable wide(bolza(), {spec}, 1);
  EXPECT_GT(wide.term_count(), f.term_count());
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    const Sl2Element g = random_element(rng, 4.0);
    const auto v = f(g);
    EXPECT_LT(std::abs(v - wide(g)), 1e-12);
    for (const auto& s : bolza()->side_pairings()) EXPECT_LT(std::abs(v - f(s * g)), 1e-9);
  }
  BumpFunction psi(spec);
  EXPECT_EQ(psi(from_iwasawa(30.0, 1.0, 0.0)), std::complex<double>(0.0));
  EXPECT_NEAR(std::abs(psi(from_iwasawa(0.3, 1.2, 0.5))), 1.0, 1e-14);
}

TEST(BundleObservable, HaarIntegralMatchesDirectQuadrature) {
  BumpSpec spec;
  spec.center = UpperHalfPoint(-0.2, 0.8);
  spec.radius = 0.9;
  spec.fiber_angle = 1.1;
  spec.fiber_concentration = 2.0;
  spec.amplitude = {1.0, 0.5};
  BumpFunction psi(spec);
  const double yc = 0.8, r = 0.9;
  const double x0 = -0.2 - yc * std::sinh(r), x1 = -0.2 + yc * std::sinh(r);
  const double y0 = yc * std::exp(-r), y1 = yc * std::exp(r);
  const int nth = 48;
  std::complex<double> total = 0.0;
  for (int k = 0; k < nth; ++k) {
    const double th = kPi * k / nth;
    const ComplexIntegrand over_x = [&](double x) {
      return composite_gauss_legendre(
          [&](double y) { return psi(from_iwasawa(x, y, th)) / (y * y); }, y0, y1, 24, 20);
    };
    total += composite_gauss_legendre(over_x, x0, x1, 24, 20) * (kPi / nth);
  }
  EXPECT_LT(std::abs(total - psi.haar_integral()), 1e-6 * std::abs(total));
}

TEST(BundleObservable, HaarAverageMatchesUnfoldedMean) {
  BumpSpec a, b;
  a.center = UpperHalfPoint(0.3, 1.2);
  a.radius = 1.4;
  b.center = UpperHalfPoint(-0.5, 0.6);
  b.radius = 0.8;
  b.amplitude = {0.0, 2.0};
  b.fiber_concentration = 3.0;
  BundleObservable f(bolza(), {a, b});
  const auto pts = sample_haar(*bolza(), 1000000, 21);
  std::complex<double> s = 0.0;
  for (const auto& g : pts) s += f(g);
  s /= static_cast<double>(pts.size());
  EXPECT_LT(std::abs(s - f.mean()), 0.01 * std::abs(f.mean()));
}
