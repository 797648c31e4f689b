// One PASS/FAIL line per acceptance criterion.
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "equilab/error.hpp"
#include "equilab/fuchsian.hpp"
#include "equilab/grid.hpp"
#include "equilab/lifted_circle.hpp"
#include "equilab/observables.hpp"
#include "equilab/ode.hpp"
#include "equilab/oracles/rk4.hpp"
#include "equilab/torus.hpp"
#include "equilab/translates.hpp"

using namespace equilab;
using namespace equilab::torus;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

IVec k(std::initializer_list<int> xs) {
  IVec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (int x : xs) out(i++) = x;
  return out;
}

RateFitOptions envelope() {
  RateFitOptions o;
  o.mode = FitMode::Envelope;
  o.window = 5;
  return o;
}

std::vector<TorusObservable> circle_observables() {
  return {TorusObservable::cosine(k({1, 0})),
          TorusObservable::cosine(k({1, 1}), 1.0, 0.4) + TorusObservable::cosine(k({0, 2}), 0.5),
          TorusObservable::cosine(k({2, -1}), 0.8, 1.1) + TorusObservable::character(k({0, 1}), {0.3, 0.2}) +
              TorusObservable::character(k({0, -1}), {0.3, -0.2})};
}

const Measure& t2_circle() {
  static const Measure m = Measure::circle(v({0.1, 0.2}), 0.3);
  return m;
}

std::vector<RateFit> circle_fits() {
  static const std::vector<RateFit> fits = [] {
    std::vector<RateFit> out;
    const auto t = logspace(10.0, 1000.0, 160);
    for (const auto& f : circle_observables())
      out.push_back(equidistribution_rate_fit(t2_circle(), TorusLattice::standard(2), DilationFamily::homothety(2), f, t,
                                              envelope()));
    return out;
  }();
  return fits;
}

Outcome circle_rate() {
  Outcome o{true, "slopes"};
  for (const auto& r : circle_fits()) {
    o.pass = o.pass && std::abs(r.fit.slope + 0.5) <= 0.1;
    o.detail += fmt::format(" {:.3f}", r.fit.slope);
  }
  o.detail += " (want -0.5 ± 0.1, 160 log-spaced t in [10, 1000])";
  return o;
}

Outcome sphere_rate() {
  const Measure m = Measure::sphere(v({0.1, 0.2, 0.3}), 0.3);
  const auto t = logspace(10.0, 1000.0, 120);
  const std::vector<TorusObservable> fs = {
      TorusObservable::cosine(k({1, 0, 0})),
      TorusObservable::cosine(k({0, 1, 1}), 1.0, 0.3) + TorusObservable::cosine(k({1, 0, 0}), 0.5),
      TorusObservable::cosine(k({1, -1, 2}), 0.7, 0.9) + TorusObservable::cosine(k({0, 0, 1}), 0.4)};
  Outcome o{true, "slopes"};
  for (const auto& f : fs) {
    const auto r = equidistribution_rate_fit(m, TorusLattice::standard(3), DilationFamily::homothety(3), f, t, envelope());
    o.pass = o.pass && std::abs(r.fit.slope + 1.0) <= 0.1;
    o.detail += fmt::format(" {:.3f}", r.fit.slope);
  }
  o.detail += " (want -1.0 ± 0.1)";
  return o;
}

Outcome rational_segment() {
  const Measure seg = Measure::segment(v({1.0, 2.0}));
  const auto lat = TorusLattice::standard(2);
  const auto t = logspace(1.0, 1000.0, 60);
  double worst = 0.0;
  for (double s : t) worst = std::max(worst, std::abs(std::abs(measures::fourier_transform(seg, s * v({2.0, -1.0}))) - 1.0));
  const auto rays = integral_ray_decay_test(seg, lat, {k({2, -1})}, t);
  const auto f = TorusObservable::character(k({2, -1}));
  double lo = 1e300, hi = 0.0;
  for (double s : t) {
    const double d = std::abs(discrepancy_series(seg, lat, DilationFamily::homothety(2), f, s));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  Outcome o;
  o.pass = worst <= 1e-10 && rays[0].verdict == RayVerdict::Stalls && hi - lo <= 1e-10;
  o.detail = fmt::format("max ||mu^(tm)| - 1| = {:.1e}, verdict {}, |disc| in [{:.12f}, {:.12f}]", worst,
                         to_string(rays[0].verdict), lo, hi);
  return o;
}

Outcome lifted_circle() {
  const auto f = TorusObservable::cosine(k({1, 0, 1})) + TorusObservable::cosine(k({1, 1, 0}), 0.7, 0.2);
  const auto r = lifted_circle_rate_fit(f, logspace(10.0, 1000.0, 160), envelope());
  const auto vertical = TorusObservable::cosine(k({0, 0, 1})) + TorusObservable::cosine(k({0, 0, 3}), 0.5);
  double vmax = 0.0;
  for (double t : {10.0, 37.5, 512.0}) vmax = std::max(vmax, std::abs(lifted_circle_discrepancy(vertical, t)));
  Outcome o;
  o.pass = std::abs(r.fit.slope + 0.5) <= 0.1 && vmax == 0.0;
  o.detail = fmt::format("slope {:.3f} (want -0.5 ± 0.1); (0,0,N3) terms give {}", r.fit.slope, vmax);
  return o;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Measure> ms = {Measure::circle(v({0.3, 0.4}), 0.7), Measure::segment(v({0.8, 0.3})),
                                   Measure::graph({0.1, 0.5, -0.4}, 0.0, 1.0), Measure::ifs_preset("sierpinski"),
                                   Measure::ifs_preset("rotation_rich")};
  Mat skew(2, 2);
  skew << 1.0, 0.4, 0.0, 1.3;
  const std::vector<TorusLattice> lats = {TorusLattice::standard(2), TorusLattice(2.0 * Mat::Identity(2, 2)),
                                          TorusLattice(skew)};
  int passed = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Measure& m = ms[i % ms.size()];
    const TorusLattice& lat = lats[(i / ms.size()) % lats.size()];
    const RotationPath rot = i % 2 ? RotationPath::planar(0, 1, 2.0 * u(rng), u(rng)) : RotationPath::identity();
    const DilationFamily dil(v({u(rng), u(rng)}), rot, v({u(rng), u(rng)}));
    std::vector<FourierTerm> terms;
    for (int j = 0; j < 3; ++j) terms.push_back({k({int(u(rng) * 5) - 2, int(u(rng) * 5) - 2}), {u(rng) - 0.5, u(rng) - 0.5}});
    const TorusObservable f(terms);
    const double t = 0.5 + 8.0 * u(rng);
    const cplx s = discrepancy_series(m, lat, dil, f, t);
    const auto mc = discrepancy_monte_carlo(m, lat, dil, f, t, 100000, 500 + i);
    const double z = mc.standard_error > 0 ? std::abs(s - mc.value) / mc.standard_error : std::abs(s - mc.value) / 1e-300;
    if (std::abs(s - mc.value) <= 4.0 * mc.standard_error + 1e-12) ++passed;
    worst = std::max(worst, std::min(z, 1e6));
  }
  return {passed == 50, fmt::format("{}/50 configs within 4 standard errors (largest z = {:.2f})", passed, worst)};
}

Outcome quantitative_bound() {
  double lo = 1e300, hi = 0.0;
  std::string list;
  for (const auto& r : circle_fits()) {
    double c = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) c = std::max(c, std::abs(r.discrepancy[i]) * std::sqrt(r.t[i]) / r.l1_norm);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    list += fmt::format(" {:.4f}", c);
  }
  return {std::isfinite(hi) && lo > 0.0 && hi / lo < 2.0,
          fmt::format("sup |disc| t^(1/2) / |f^|_1 ={} (ratio {:.3f}, want < 2)", list, hi / lo)};
}

double lie_gap(const LieVector& x, const LieVector& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c)}) /
         (1.0 + std::max({std::abs(y.a), std::abs(y.b), std::abs(y.c)}));
}

double mat_gap(const Mat2& x, const Mat2& y) {
  const double d = std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d)});
  return d / (1.0 + std::max({std::abs(y.a), std::abs(y.b), std::abs(y.c), std::abs(y.d)}));
}

Outcome lie_identities() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = std::max({lie_gap(bracket(lie::X, lie::U), lie::U), lie_gap(bracket(lie::Theta, lie::U), {2.0, 0.0, 0.0}),
                           lie_gap(bracket(lie::X, lie::V), {0.0, 0.0, -1.0}), lie_gap(bracket(lie::U, lie::V), {2.0, 0.0, 0.0})});
  for (int i = 0; i < 200; ++i) {
    const LieVector W{u(rng), u(rng), u(rng)}, Z{u(rng), u(rng), u(rng)};
    const double t = 6.0 * u(rng), s = 3.0 * u(rng);
    // Ad_exp(tX) W = αX + (γ+β)e^t U + (γ-β)e^{-t} V.
    const LieVector ad{W.alpha(), (W.gamma() + W.beta()) * std::exp(t), (W.gamma() - W.beta()) * std::exp(-t)};
    worst = std::max(worst, lie_gap(adjoint(exp_lie(lie::X, t), W), ad));
    const Sl2Element g = exp_lie(Z, s);
    const Mat2 conj = g.matrix() * W.matrix() * g.inverse().matrix();
    worst = std::max(worst, lie_gap(adjoint(g, W), LieVector::from_matrix(conj)));
    worst = std::max(worst, lie_gap(bracket(W, Z), LieVector::from_matrix(W.matrix() * Z.matrix() - Z.matrix() * W.matrix())));
    worst = std::max(worst, mat_gap((exp_lie(lie::X, t) * exp_lie(lie::U, s)).matrix(),
                                    (exp_lie(lie::U, s * std::exp(t)) * exp_lie(lie::X, t)).matrix()));
    worst = std::max(worst, mat_gap((exp_lie(lie::U, s) * exp_lie(lie::X, -t)).matrix(),
                                    (exp_lie(lie::X, -t) * exp_lie(lie::U, s * std::exp(t))).matrix()));
  }
  return {worst <= 1e-9, fmt::format("worst relative residual {:.2e} over Ad, brackets and commutation (want <= 1e-9)", worst)};
}

Outcome lemma62() {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const LieVector Z1{u(rng), u(rng), u(rng)}, Z2{u(rng), u(rng), u(rng)};
    const Sl2Element p = from_iwasawa(u(rng), std::exp(0.5 * u(rng)), kPi * u(rng));
    worst = std::max(worst, ode::lemma62_derivative(Z1, Z2, p, 2.0 * u(rng), 2.0 * u(rng)));
  }
  return {worst <= 1e-8, fmt::format("100 instances, worst finite-difference gap {:.2e} (want <= 1e-8)", worst)};
}

Outcome lemma61() {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int used = 0;
  while (used < 30) {
    const LieVector W{u(rng), u(rng), u(rng)};
    if (std::abs(W.gamma() + W.beta()) < 0.2) continue;  // γ ≠ -β
    const Sl2Element p = from_iwasawa(0.3 * u(rng), std::exp(0.3 * u(rng)), kPi * u(rng));
    const double sigma = 0.5 + std::abs(u(rng));
    const double t = ode::t0_threshold(W) + 0.3 + 1.5 * std::abs(u(rng));
    const int n = static_cast<int>(std::lround(2.0 * u(rng)));
    translates::TranslateConfig cfg;
    cfg.W = W;
    cfg.p = p;
    cfg.sigma = sigma;
    const Mat2 m = translates::curve_point(cfg, 0.5 * sigma, t).matrix();
    const cplx z = (m.a * cplx(0.0, 1.0) + m.b) / (m.c * cplx(0.0, 1.0) + m.d);
    const EigenObservable f(n, z.real(), z.imag(), 3.0, {1.0, 0.3});
    const auto r = ode::lemma61(W, f, n, p, sigma, t);
    worst = std::max({worst, r.eq_uf.relative_residual, r.eq_u2f.relative_residual});
    ++used;
  }
  return {worst <= 1e-7, fmt::format("30 instances, worst relative residual {:.2e} (want <= 1e-7)", worst)};
}

Outcome lemma64() {
  const char* names[] = {"0<mu<1/4", "mu=1/4", "mu>1/4"};
  double sup = 0.0, shift = 0.0, cmax = 0.0;
  std::string per_case;
  bool pass = true;
  for (int kind = 0; kind < 3; ++kind) {
    std::mt19937_64 rng(640 + kind);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double case_c = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double mu = kind == 0 ? 0.01 + 0.23 * u(rng) : kind == 1 ? 0.25 : 0.26 + 4.0 * u(rng);
      const double t1 = 0.5 + 1.5 * u(rng);
      const cplx a0(u(rng), u(rng)), a1(u(rng), u(rng)), a2(u(rng), u(rng));
      const double w1 = 3.0 * u(rng), w2 = 3.0 * u(rng);
      const auto G = [=](double t) { return a0 + a1 * std::exp(cplx(0.0, w1 * t)) + a2 * std::exp(-t) * std::cos(w2 * t); };
      const cplx k1(u(rng) - 0.5, u(rng) - 0.5), dk1(u(rng) - 0.5, u(rng) - 0.5);
      const auto prob = ode::OdeProblem::make(mu, 0.0, t1, G, k1, dk1);
      const auto ts = linspace(t1, t1 + 10.0, 201);
      const auto closed = ode::ClosedForm(prob).values(ts);
      oracles::Rk4Options ro;
      ro.tolerance = 1e-12;
      const auto ref = oracles::solve_damped_oscillator(mu, G, t1, k1, dk1, ts, ro);
      for (std::size_t j = 0; j < ts.size(); ++j) sup = std::max(sup, std::abs(closed[j] - ref[j]));
      const ode::ClosedForm sol(prob);
      const auto later = ode::OdeProblem::make(mu, 0.0, t1 + 1.0, G, sol.value(t1 + 1.0), sol.derivative(t1 + 1.0));
      const auto a = ode::extract_coefficients(prob), b = ode::extract_coefficients(later);
      shift = std::max({shift, std::abs(a.D_plus - b.D_plus), std::abs(a.D_minus - b.D_minus)});
      pass = pass && std::isfinite(a.remainder_constant);
      case_c = std::max(case_c, a.remainder_constant);
    }
    cmax = std::max(cmax, case_c);
    per_case += fmt::format(" {}: C <= {:.3g};", names[kind], case_c);
  }
  pass = pass && sup <= 1e-8 && shift <= 1e-8;
  return {pass, fmt::format("3x50 instances, sup |closed - RK4| {:.1e}, t1 shift of D+- {:.1e} (want <= 1e-8);{}", sup,
                            shift, per_case)};
}

std::shared_ptr<const fuchsian::FuchsianGroup> bolza() {
  static const auto g = std::make_shared<const fuchsian::FuchsianGroup>(fuchsian::FuchsianGroup::bolza());
  return g;
}

translates::ExpansionReport bolza_run(const LieVector& W) {
  BumpSpec a;
  a.center = UpperHalfPoint(0.2, 1.1);
  a.radius = 2.0;
  BumpSpec b;
  b.center = UpperHalfPoint(-0.4, 0.7);
  b.radius = 2.0;
  b.fiber_angle = 1.0;
  b.amplitude = 0.6;
  const BundleObservable f(bolza(), {a, b});
  translates::TranslateConfig cfg;
  cfg.group = bolza();
  cfg.W = W;
  cfg.sigma = kPi;
  cfg.p = from_iwasawa(0.0, 1.0, 0.0);
  cfg.t_grid = linspace(2.0, 10.0, 17);
  return translates::run_translates(cfg, f, f.mean());
}

Outcome bolza_equidistribution() {
  const fuchsian::CellPartition cells(bolza());
  const Sl2Element q = from_iwasawa(0.1, 1.3, 0.4);
  const std::size_t n = 2000000;
  std::vector<double> tv;
  std::vector<Sl2Element> pts(n);
  for (double t : {4.0, 6.0, 8.0, 10.0, 12.0}) {
    for (std::size_t i = 0; i < n; ++i)
      pts[i] = fuchsian::flow_reduce(*bolza(), q * exp_lie(lie::Theta, kPi * static_cast<double>(i) / n), t);
    tv.push_back(cells.total_variation(cells.histogram(pts)));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < tv.size(); ++i) inversions += tv[i] > tv[i - 1];
  const auto rep = bolza_run(lie::Theta);
  Outcome o;
  o.pass = inversions <= 1 && tv.back() < tv.front() && rep.envelope_exponent >= -0.65 && rep.envelope_exponent <= -0.35;
  o.detail = fmt::format("TV at t = 4..12: {:.4f} {:.4f} {:.4f} {:.4f} {:.4f} ({} inversions); W = Theta envelope slope {:.3f} "
                         "(want [-0.65, -0.35]); assumption: {}",
                         tv[0], tv[1], tv[2], tv[3], tv[4], inversions, rep.envelope_exponent, rep.assumption);
  return o;
}

Outcome bolza_degenerate() {
  const auto rep = bolza_run(lie::V);
  return {rep.envelope_exponent >= -0.05 && !rep.stable_component,
          fmt::format("W = V (b = 0) envelope slope {:.4f} (want >= -0.05), stable component {}", rep.envelope_exponent,
                      rep.stable_component)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "circle in T^2 rate", circle_rate},
      {2, "sphere in T^3 rate", sphere_rate},
      {3, "rational segment obstruction", rational_segment},
      {4, "lifted circle", lifted_circle},
      {5, "series vs Monte Carlo", oracle_equivalence},
      {6, "quantitative bound constant", quantitative_bound},
      {7, "Lie identities", lie_identities},
      {8, "curve derivative formula", lemma62},
      {9, "Uf and U^2f identities", lemma61},
      {10, "ODE closed forms", lemma64},
      {11, "Bolza equidistribution", bolza_equidistribution},
      {12, "degenerate b = 0 regime", bolza_degenerate},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    fmt::print("{} {:2d} {}: {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
