#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/observables.hpp"
#include "equilab/ode.hpp"
#include "equilab/oracles/rk4.hpp"
#include "equilab/translates.hpp"

using namespace equilab;
using namespace equilab::ode;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Instance {
  LieVector W;
  Sl2Element p;
  double sigma, t;
  int n;
};

// Random W with b ≠ 0, t past the threshold, and a weight-n observable centred on the curve.
Instance random_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Instance in;
  do {
    in.W = LieVector{u(rng), u(rng), u(rng)};
  } while (std::abs(in.W.b) < 0.2);
  in.p = from_iwasawa(0.3 * u(rng), std::exp(0.3 * u(rng)), kPi * u(rng));
  in.sigma = 0.5 + std::abs(u(rng));
  in.t = t0_threshold(in.W) + 0.3 + 1.5 * std::abs(u(rng));
  in.n = static_cast<int>(std::lround(2.0 * u(rng)));
  return in;
}

EigenObservable observable_on_curve(const Instance& in) {
  translates::TranslateConfig cfg;
  cfg.W = in.W;
  cfg.p = in.p;
  cfg.sigma = in.sigma;
  const Mat2 m = translates::curve_point(cfg, 0.5 * in.sigma, in.t).matrix();
  const cplx z = (m.a * cplx(0.0, 1.0) + m.b) / (m.c * cplx(0.0, 1.0) + m.d);
  return EigenObservable(in.n, z.real(), z.imag(), 3.0, {1.0, 0.3});
}

std::vector<double> grid(double a, double b, int n) { return linspace(a, b, n); }

double sup_error(const OdeProblem& prob, const std::vector<double>& ts) {
  const auto closed = ClosedForm(prob).values(ts);
  oracles::Rk4Options opt;
  opt.tolerance = 1e-12;
  const auto ref = oracles::solve_damped_oscillator(prob.mu, prob.G, prob.t1, prob.k1, prob.dk1, ts, opt);
  double e = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) e = std::max(e, std::abs(closed[i] - ref[i]));
  return e;
}

const auto wiggly = [](double t) { return cplx(std::cos(2.0 * t), std::sin(t)) + 0.5; };

}  // namespace

TEST(CurveIdentities, CorrectedIdentitiesHoldOnRandomCurves) {
  std::mt19937_64 rng(61);
  int printed_off = 0;
  for (int i = 0; i < 30; ++i) {
    const Instance in = random_instance(rng);
    const auto f = observable_on_curve(in);
    const auto r = lemma61(in.W, f, in.n, in.p, in.sigma, in.t);
    ASSERT_GT(std::abs(r.k) + std::abs(r.Uf), 1e-6) << "observable misses the curve, instance " << i;
    EXPECT_LT(r.eq_uf.relative_residual, 1e-7) << i;
    EXPECT_LT(r.eq_u2f.relative_residual, 1e-7) << i;
    if (r.eq_u2f_printed.relative_residual > 1e-4) ++printed_off;
  }
  EXPECT_GT(printed_off, 20);
}

TEST(CurveIdentities, DenominatorAndThreshold) {
  const LieVector W{0.0, 1.0, 3.0};  // γ+β = 1, γ-β = 3: no positive root
  EXPECT_DOUBLE_EQ(t0_threshold(W), 0.1);
  const LieVector Wr{0.0, -1.0, 3.0};  // γ+β = -1, γ-β = 3
  const double root = -0.5 * std::log(1.0 / 3.0);
  EXPECT_NEAR(t0_threshold(Wr), root + 0.1, 1e-15);
  EXPECT_NEAR(lemma61_denominator(Wr, root), 0.0, 1e-15);
  EigenObservable f(0, 0.0, 1.0, 2.0);
  EXPECT_THROW(lemma61(Wr, f, 0, Sl2Element(), 1.0, root), SingularDenominator);
  EXPECT_THROW(assemble_G(lie::V, f, 0, Sl2Element(), 1.0, 2.0), SingularDenominator);
  EXPECT_THROW(assemble_G(Wr, f, 0, Sl2Element(), 1.0, 0.5 * root), SingularDenominator);
}

TEST(CurveDerivative, FlowDerivativeMatchesAdjointField) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const LieVector Z1{u(rng), u(rng), u(rng)}, Z2{u(rng), u(rng), u(rng)};
    const Sl2Element p = from_iwasawa(u(rng), std::exp(0.5 * u(rng)), kPi * u(rng));
    EXPECT_LT(lemma62_derivative(Z1, Z2, p, 2.0 * u(rng), 2.0 * u(rng)), 1e-8) << i;
  }
}

TEST(CurveIdentities, AssembledGMatchesDirectAverage) {
  std::mt19937_64 rng(63);
  int printed_off = 0;
  for (int i = 0; i < 10; ++i) {
    const Instance in = random_instance(rng);
    const auto f = observable_on_curve(in);
    const GReport g = assemble_G(in.W, f, in.n, in.p, in.sigma, in.t);
    EXPECT_LT(g.relative_residual, 1e-7) << i;
    if (std::abs(g.printed - g.direct) > 1e-4 * (1.0 + std::abs(g.direct))) ++printed_off;
  }
  EXPECT_GT(printed_off, 5);
}

TEST(DampedOscillator, ZeroForcingIsHomogeneous) {
  const auto prob = OdeProblem::make(0.1, 0.0, 1.0, [](double) { return cplx(0.0); }, {1.0, 0.5}, {-0.3, 0.0});
  const ClosedForm sol(prob);
  const cplx nu = prob.nu;
  for (double t : {1.0, 2.5, 7.0}) {
    const cplx expect = sol.c1() * std::exp(-(1.0 - nu) * t / 2.0) + sol.c2() * std::exp(-(1.0 + nu) * t / 2.0);
    EXPECT_LT(std::abs(sol.value(t) - expect), 1e-14);
  }
  EXPECT_LT(std::abs(sol.value(1.0) - prob.k1), 1e-14);
  EXPECT_LT(std::abs(sol.derivative(1.0) - prob.dk1), 1e-14);
  const auto c = extract_coefficients(prob);
  EXPECT_LT(std::abs(c.D_plus - sol.c2()), 1e-14);
  EXPECT_LT(std::abs(c.D_minus - sol.c1()), 1e-14);
  EXPECT_LT(c.remainder_constant, 1e-10);
}

TEST(DampedOscillator, NonPositiveMuSolvesButDoesNotExpand) {
  const auto prob = OdeProblem::make(0.0, 0.0, 1.0, [](double) { return cplx(1.0); }, {1.0, 0.0}, {0.0, 0.0});
  EXPECT_EQ(prob.case_tag(), CaseTag::NonPositive);
  EXPECT_LT(sup_error(prob, grid(1.0, 8.0, 15)), 1e-8);
  EXPECT_THROW(extract_coefficients(prob), ValidationError);
  const auto neg = OdeProblem::make(-0.5, 0.0, 1.0, wiggly, {0.2, 0.0}, {0.1, 0.0});
  EXPECT_LT(sup_error(neg, grid(1.0, 5.0, 9)), 1e-8);
}

TEST(DampedOscillator, ExactParticularSolution) {
  const double mu = 0.5, t1 = 1.0;
  const auto prob = OdeProblem::make(mu, 0.0, t1, [](double) { return cplx(1.0); }, std::exp(-t1) / mu, -std::exp(-t1) / mu);
  const auto ts = grid(t1, t1 + 20.0, 81);
  const auto closed = ClosedForm(prob).values(ts);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_LT(std::abs(closed[i] - std::exp(-ts[i]) / mu), 1e-12);
  EXPECT_LT(sup_error(prob, ts), 1e-8);
}

TEST(DampedOscillator, AgreesWithRungeKuttaAcrossCases) {
  for (double mu : {0.05, 0.2, 0.25, 0.25 + 5e-9, 0.3, 0.5, 2.0, 10.0}) {
    const auto prob = OdeProblem::make(mu, 0.0, 0.7, wiggly, {0.4, -0.2}, {-0.1, 0.3});
    EXPECT_LT(sup_error(prob, grid(0.7, 20.7, 41)), 1e-8) << mu;
  }
}

TEST(DampedOscillator, BackwardsFromT1) {
  const auto prob = OdeProblem::make(0.4, 0.0, 3.0, wiggly, {0.4, -0.2}, {-0.1, 0.3});
  const ClosedForm sol(prob);
  const auto p2 = OdeProblem::make(0.4, 0.0, 1.0, wiggly, sol.value(1.0), sol.derivative(1.0));
  EXPECT_LT(std::abs(ClosedForm(p2).value(3.0) - prob.k1), 1e-11);
  EXPECT_THROW(sol.value(-0.5), ValidationError);
}

TEST(DampedOscillator, BranchesMeetAtQuarter) {
  const double t1 = 1.0;
  auto lead_at = [&](double mu, double t) {
    const auto prob = OdeProblem::make(mu, 0.0, t1, wiggly, {0.4, -0.2}, {-0.1, 0.3});
    return std::pair{leading_terms(extract_coefficients(prob), prob, t), ClosedForm(prob).value(t)};
  };
  for (double t : {3.0, 6.0}) {
    const auto [lc, kc] = lead_at(0.25, t);
    for (double d : {-1e-6, 1e-6}) {
      const auto [l, k] = lead_at(0.25 + d, t);
      EXPECT_LT(std::abs(k - kc), 1e-5);
      EXPECT_LT(std::abs(l - lc), 1e-4);
    }
  }
  EXPECT_EQ(OdeProblem::make(0.25 + 1e-9, 0.0, 1.0, wiggly, 0.0, 0.0).case_tag(), CaseTag::Critical);
  EXPECT_EQ(OdeProblem::make(0.26, 0.0, 1.0, wiggly, 0.0, 0.0).case_tag(), CaseTag::Oscillatory);
  EXPECT_EQ(OdeProblem::make(0.2, 0.0, 1.0, wiggly, 0.0, 0.0).case_tag(), CaseTag::Real);
}

TEST(DampedOscillator, TailIntegralsInClosedForm) {
  const double t1 = 0.8;
  const auto G = [](double x) { return cplx(std::exp(-x)); };
  for (double mu : {0.1, 0.6}) {
    const auto prob = OdeProblem::make(mu, 0.0, t1, G, {0.3, 0.1}, {-0.2, 0.0});
    const ClosedForm sol(prob);
    const cplx nu = prob.nu;
    const cplx first = std::exp(-(3.0 + nu) * t1 / 2.0) / ((3.0 + nu) / 2.0);
    const cplx second = std::exp(-(3.0 - nu) * t1 / 2.0) / ((3.0 - nu) / 2.0);
    const cplx P = sol.c2() - second / nu, Q = sol.c1() + first / nu;
    const auto c = extract_coefficients(prob);
    if (prob.case_tag() == CaseTag::Real) {
      EXPECT_LT(std::abs(c.D_plus - P), 1e-12);
      EXPECT_LT(std::abs(c.D_minus - Q), 1e-12);
    } else {
      EXPECT_LT(std::abs(c.D_plus - (P + Q)), 1e-12);
      EXPECT_LT(std::abs(c.D_minus - cplx(0.0, 1.0) * (Q - P)), 1e-12);
    }
  }
  // μ = 1/4: ∫ξe^{-3ξ/2} and ∫e^{-3ξ/2} from t1 to ∞.
  const auto prob = OdeProblem::make(0.25, 0.0, t1, G, {0.3, 0.1}, {-0.2, 0.0});
  const ClosedForm sol(prob);
  const double e = std::exp(-1.5 * t1);
  const double J1 = e * (t1 / 1.5 + 1.0 / 2.25), J2 = e / 1.5;
  const auto c = extract_coefficients(prob);
  EXPECT_LT(std::abs(c.D_plus - (sol.c1() - J1)), 1e-12);
  EXPECT_LT(std::abs(c.D_minus - (sol.c2() + J2)), 1e-12);
}

TEST(DampedOscillator, CoefficientsIndependentOfT1) {
  for (double mu : {0.15, 0.25, 0.9}) {
    const auto prob = OdeProblem::make(mu, 0.0, 1.0, wiggly, {0.4, -0.2}, {-0.1, 0.3});
    const ClosedForm sol(prob);
    const auto later = OdeProblem::make(mu, 0.0, 2.5, wiggly, sol.value(2.5), sol.derivative(2.5));
    const auto a = extract_coefficients(prob), b = extract_coefficients(later);
    EXPECT_LT(std::abs(a.D_plus - b.D_plus), 1e-8) << mu;
    EXPECT_LT(std::abs(a.D_minus - b.D_minus), 1e-8) << mu;
  }
}

TEST(DampedOscillator, RemainderIsBounded) {
  for (double mu : {0.1, 0.25, 0.7, 3.0}) {
    const auto prob = OdeProblem::make(mu, 0.0, 1.0, wiggly, {0.4, -0.2}, {-0.1, 0.3});
    const auto c = extract_coefficients(prob);
    EXPECT_TRUE(std::isfinite(c.remainder_constant));
    EXPECT_LT(c.remainder_constant, 50.0) << mu;
    ExtractOptions wide;
    wide.remainder_to = 25.0;
    EXPECT_LT(extract_coefficients(prob, wide).remainder_constant, 2.0 * c.remainder_constant + 1.0) << mu;
  }
}

TEST(DampedOscillator, GrowingForcingIsRejected) {
  const auto prob = OdeProblem::make(0.5, 0.0, 1.0, [](double t) { return cplx(std::exp(0.1 * t)); }, 0.0, 0.0);
  EXPECT_THROW(extract_coefficients(prob), UnboundedG);
  const auto bounded = OdeProblem::make(0.5, 0.0, 1.0, [](double t) { return cplx(2.0 - std::exp(-t)); }, 0.0, 0.0);
  EXPECT_NO_THROW(extract_coefficients(bounded));
}

TEST(DampedOscillator, ProblemValidation) {
  EXPECT_THROW(OdeProblem::make(0.3, 1.0, 1.0, wiggly, 0.0, 0.0), ValidationError);
  auto p = OdeProblem::make(0.3, 0.0, 1.0, wiggly, 0.0, 0.0);
  p.nu = -p.nu;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_EQ(spectral_nu(0.5), cplx(0.0, 1.0));
  EXPECT_EQ(spectral_nu(0.0), cplx(1.0, 0.0));
}
