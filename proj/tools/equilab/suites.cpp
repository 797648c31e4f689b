#include <fmt/format.h>

#include <cmath>
#include <random>

#include "commands.hpp"
#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/json_io.hpp"
#include "equilab/observables.hpp"
#include "equilab/ode.hpp"
#include "equilab/oracles/rk4.hpp"
#include "equilab/parallel.hpp"
#include "equilab/translates.hpp"

namespace equilab::cli {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

struct Tally {
  Table table{{"suite", "instance", "detail", "residual", "tolerance", "pass"}};
  std::size_t passed = 0, failed = 0;
  void add(const std::string& suite, std::size_t i, const std::string& detail, double r, double tol) {
    const bool ok = r <= tol;
    (ok ? passed : failed) += 1;
    table.add({suite, std::to_string(i), detail, num(r), num(tol), ok ? "1" : "0"});
  }
};

Artifacts finish(Tally& t, const char* command, const std::string& suite) {
  Artifacts a;
  a.results = t.table;
  a.fit = {{"command", command}, {"suite", suite}, {"passed", t.passed}, {"failed", t.failed}};
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.table.rows().size(); ++i) pts.emplace_back(static_cast<double>(i), std::stod(t.table.rows()[i][3]));
  a.plot.blocks.push_back(std::move(pts));
  return a;
}

// Random forcing: constant + oscillation + decaying cosine.
std::function<cplx(double)> random_forcing(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const cplx a0(u(rng), u(rng)), a1(u(rng), u(rng)), a2(u(rng), u(rng));
  const double w1 = 3.0 * u(rng), w2 = 3.0 * u(rng);
  return [=](double t) { return a0 + a1 * std::exp(cplx(0.0, w1 * t)) + a2 * std::exp(-t) * std::cos(w2 * t); };
}

void lemma64_suite(Tally& tally, std::size_t n, double tol, std::uint64_t seed, unsigned jobs) {
  struct Row {
    std::string detail;
    double sup = 0.0, shift = 0.0;
  };
  const char* names[] = {"0<mu<1/4", "mu=1/4", "mu>1/4"};
  for (int kind = 0; kind < 3; ++kind) {
    const auto rows = parallel_map(n, jobs, [&](std::size_t i) {
      std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(kind) * 7919u + i);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double mu = kind == 0 ? 0.01 + 0.23 * u(rng) : kind == 1 ? 0.25 : 0.26 + 4.0 * u(rng);
      const double t1 = 0.5 + 1.5 * u(rng);
      const auto G = random_forcing(rng);
      const cplx k1(u(rng) - 0.5, u(rng) - 0.5), dk1(u(rng) - 0.5, u(rng) - 0.5);
      const auto prob = ode::OdeProblem::make(mu, 0.0, t1, G, k1, dk1);
      const auto ts = linspace(t1, t1 + 10.0, 101);
      const auto closed = ode::ClosedForm(prob).values(ts);
      oracles::Rk4Options ro;
      ro.tolerance = 1e-12;
      const auto ref = oracles::solve_damped_oscillator(mu, G, t1, k1, dk1, ts, ro);
      Row r;
      for (std::size_t j = 0; j < ts.size(); ++j) r.sup = std::max(r.sup, std::abs(closed[j] - ref[j]));
      const ode::ClosedForm sol(prob);
      const auto later = ode::OdeProblem::make(mu, 0.0, t1 + 1.0, G, sol.value(t1 + 1.0), sol.derivative(t1 + 1.0));
      const auto a = ode::extract_coefficients(prob), b = ode::extract_coefficients(later);
      r.shift = std::max(std::abs(a.D_plus - b.D_plus), std::abs(a.D_minus - b.D_minus));
      r.detail = fmt::format("{} mu={:.6g} C={:.4g}", names[kind], mu, a.remainder_constant);
      return r;
    });
    for (std::size_t i = 0; i < n; ++i) tally.add("lemma64", i, rows[i].detail, std::max(rows[i].sup, rows[i].shift), tol);
  }
}

struct LemmaInstance {
  LieVector W;
  Sl2Element p;
  double sigma = 1.0, t = 1.0;
  int n = 0;
};

LemmaInstance random_lemma_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LemmaInstance in;
  do {
    in.W = LieVector{u(rng), u(rng), u(rng)};
  } while (std::abs(in.W.b) < 0.2);
  in.p = from_iwasawa(0.3 * u(rng), std::exp(0.3 * u(rng)), kPi * u(rng));
  in.sigma = 0.5 + std::abs(u(rng));
  in.t = ode::t0_threshold(in.W) + 0.3 + 1.5 * std::abs(u(rng));
  in.n = static_cast<int>(std::lround(2.0 * u(rng)));
  return in;
}

void lemma61_suite(Tally& tally, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto in = random_lemma_instance(rng);
    translates::TranslateConfig cfg;
    cfg.W = in.W;
    cfg.p = in.p;
    cfg.sigma = in.sigma;
    const Mat2 m = translates::curve_point(cfg, 0.5 * in.sigma, in.t).matrix();
    const cplx z = (m.a * cplx(0.0, 1.0) + m.b) / (m.c * cplx(0.0, 1.0) + m.d);
    const EigenObservable f(in.n, z.real(), z.imag(), 3.0, {1.0, 0.3});
    const auto r = ode::lemma61(in.W, f, in.n, in.p, in.sigma, in.t);
    tally.add("lemma61", i, "U f", r.eq_uf.relative_residual, 1e-7);
    tally.add("lemma61", i, "U^2 f", r.eq_u2f.relative_residual, 1e-7);
  }
}

void lemma62_suite(Tally& tally, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < 100; ++i) {
    const LieVector Z1{u(rng), u(rng), u(rng)}, Z2{u(rng), u(rng), u(rng)};
    const Sl2Element p = from_iwasawa(u(rng), std::exp(0.5 * u(rng)), kPi * u(rng));
    tally.add("lemma62", i, "flow derivative", ode::lemma62_derivative(Z1, Z2, p, 2.0 * u(rng), 2.0 * u(rng)), 1e-8);
  }
}

double max_entry(const Mat2& m) { return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)}); }

double lie_gap(const LieVector& x, const LieVector& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c)}) /
         (1.0 + std::max({std::abs(y.a), std::abs(y.b), std::abs(y.c)}));
}

void lie_suite(Tally& tally, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  tally.add("lie", 0, "[X,U] = U", lie_gap(bracket(lie::X, lie::U), lie::U), 1e-9);
  tally.add("lie", 0, "[Theta,U] = 2X", lie_gap(bracket(lie::Theta, lie::U), LieVector{2.0, 0.0, 0.0}), 1e-9);
  tally.add("lie", 0, "[X,V] = -V", lie_gap(bracket(lie::X, lie::V), LieVector{0.0, 0.0, -1.0}), 1e-9);
  for (std::size_t i = 0; i < 100; ++i) {
    const LieVector W{u(rng), u(rng), u(rng)}, Z{u(rng), u(rng), u(rng)};
    const double t = 5.0 * u(rng), s = 2.0 * u(rng);
    tally.add("lie", i, "Ad_exp(tX)", lie_gap(adjoint(exp_lie(lie::X, t), W), LieVector{W.a, W.b * std::exp(t), W.c * std::exp(-t)}), 1e-9);
    const Mat2 comm = W.matrix() * Z.matrix() - Z.matrix() * W.matrix();
    tally.add("lie", i, "bracket", lie_gap(bracket(W, Z), LieVector::from_matrix(comm)), 1e-9);
    const Mat2 lhs = (exp_lie(lie::X, t) * exp_lie(lie::U, s)).matrix();
    const Mat2 rhs = (exp_lie(lie::U, s * std::exp(t)) * exp_lie(lie::X, t)).matrix();
    tally.add("lie", i, "geodesic-horocycle", max_entry(lhs - rhs) / (1.0 + max_entry(lhs)), 1e-9);
    const LieVector back = LieVector::from_xtr(W.alpha(), W.beta(), W.gamma());
    tally.add("lie", i, "basis round trip", lie_gap(back, W), 1e-14);
  }
}

}  // namespace

Artifacts ode_check(const RunContext& ctx, const std::string& suite) {
  const json& c = ctx.config;
  const std::string w = "ode-check";
  require_payload_keys(c, {"instances", "tolerance"}, w);
  if (suite != "lemma64") throw ValidationError(w + ": unknown suite '" + suite + "' (known: lemma64)");
  Tally tally;
  lemma64_suite(tally, count_or(c, "instances", 50, w), number_or(c, "tolerance", 1e-8, w), ctx.seed, ctx.jobs);
  return finish(tally, "ode-check", suite);
}

Artifacts lemma_check(const RunContext& ctx, const std::string& suite) {
  require_payload_keys(ctx.config, {}, "lemma-check");
  Tally tally;
  const bool all = suite == "all";
  if (!all && suite != "lie" && suite != "lemma61" && suite != "lemma62")
    throw ValidationError("lemma-check: unknown suite '" + suite + "' (known: lie, lemma61, lemma62, all)");
  if (all || suite == "lie") lie_suite(tally, ctx.seed);
  if (all || suite == "lemma62") lemma62_suite(tally, ctx.seed + 1);
  if (all || suite == "lemma61") lemma61_suite(tally, ctx.seed + 2);
  return finish(tally, "lemma-check", suite);
}

}  // namespace equilab::cli
