#include "equilab/ode.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/quadrature.hpp"
#include "equilab/translates.hpp"

namespace equilab::ode {

namespace {

constexpr cplx kI{0.0, 1.0};

translates::TranslateConfig trivial_config(const LieVector& W, const Sl2Element& p, double sigma,
                                           const Lemma61Options& opt) {
  translates::TranslateConfig cfg;
  cfg.W = W;
  cfg.p = p;
  cfg.sigma = sigma;
  cfg.order = opt.order;
  cfg.panel_length = opt.panel_length;
  return cfg;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

struct Formulae {
  cplx Uf, UXf, U2f, U2f_printed, G, G_printed;
};

// Right-hand sides of the identities from the boundary terms and k, k', k''.
Formulae formulae(const LieVector& W, int n, double t, const Lemma61Report& r) {
  const double alpha = W.alpha(), beta = W.beta(), gamma = W.gamma();
  const double e = std::exp(-t);
  const double den = gamma + beta + (gamma - beta) * e * e;
  const double P = den / e;
  const cplx in = kI * static_cast<double>(n);
  const cplx core = r.A + alpha * r.dk + in * (gamma - beta) * e * r.k;
  Formulae out;
  out.Uf = e / den * core;
  out.UXf = (r.C - alpha * r.d2k - (gamma - beta) * e * (in * r.dk - in * r.k + 2.0 * out.Uf)) / P;
  out.U2f = (r.B - alpha * out.UXf - (alpha - in * (gamma - beta) * e) * out.Uf - 2.0 * (gamma - beta) * e * r.dk) / P;
  const cplx inner = alpha * (r.C - alpha * r.d2k - in * (gamma - beta) * e * r.d2k) + (alpha - in * (gamma - beta) * e) * core;
  out.U2f_printed = e / den * (r.B - e / den * inner);
  out.G = (out.U2f - in * out.Uf) / e;
  out.G_printed = (r.B - e / den * inner - in * core) / den;
  return out;
}

}  // namespace

double lemma61_denominator(const LieVector& W, double t) {
  return W.gamma() + W.beta() + (W.gamma() - W.beta()) * std::exp(-2.0 * t);
}

double t0_threshold(const LieVector& W) {
  const double sum = W.gamma() + W.beta(), diff = W.gamma() - W.beta();
  double root = 0.0;
  if (diff != 0.0 && -sum / diff > 0.0) root = -0.5 * std::log(-sum / diff);
  return std::max(root, 0.0) + 0.1;
}

Lemma61Report lemma61(const LieVector& W, const GroupFunction& f, int n, const Sl2Element& p, double sigma, double t,
                      const Lemma61Options& opt) {
  const double den = lemma61_denominator(W, t);
  if (std::abs(den) < 1e-12 * (std::abs(W.gamma() + W.beta()) + std::abs(W.gamma() - W.beta()) + 1e-300))
    throw SingularDenominator("lemma61: γ + β + (γ - β)e^{-2t} vanishes at t = " + std::to_string(t));
  const auto cfg = trivial_config(W, p, sigma, opt);
  const auto avg = translates::curve_averages(cfg, t, 6, [&](const Mat2& g, cplx* out) {
    const LieJet jx = lie_jet(f, g, lie::X);
    const LieJet ju = lie_jet(f, g, lie::U);
    out[0] = jx.value;
    out[1] = jx.first;
    out[2] = jx.second;
    out[3] = ju.first;
    out[4] = ju.second;
    out[5] = lie_mixed(f, g, lie::U, lie::X);
  });
  Lemma61Report r;
  r.k = avg.values[0];
  r.dk = -avg.values[1];
  r.d2k = avg.values[2];
  r.Uf = avg.values[3];
  r.U2f = avg.values[4];
  r.UXf = avg.values[5];
  r.quad_error = avg.quad_error;
  const Mat2 g1 = translates::curve_point(cfg, sigma, t).matrix();
  const Mat2 g0 = translates::curve_point(cfg, 0.0, t).matrix();
  const LieJet x1 = lie_jet(f, g1, lie::X), x0 = lie_jet(f, g0, lie::X);
  const LieJet u1 = lie_jet(f, g1, lie::U), u0 = lie_jet(f, g0, lie::U);
  r.A = (x1.value - x0.value) / sigma;
  r.B = (u1.first - u0.first) / sigma;
  r.C = (x1.first - x0.first) / sigma;
  const Formulae fm = formulae(W, n, t, r);
  r.eq_uf = {r.Uf, fm.Uf, rel(r.Uf, fm.Uf)};
  r.eq_u2f = {r.U2f, fm.U2f, rel(r.U2f, fm.U2f)};
  r.eq_u2f_printed = {r.U2f, fm.U2f_printed, rel(r.U2f, fm.U2f_printed)};
  return r;
}

double lemma62_derivative(const LieVector& Z1, const LieVector& Z2, const Sl2Element& p, double t, double s,
                          double h) {
  auto curve = [&](double u) { return (p * exp_lie(Z2, u) * exp_lie(Z1, t)).matrix(); };
  const Mat2 fd = (1.0 / (2.0 * h)) * (curve(s + h) - curve(s - h));
  const Mat2 tangent = curve(s) * adjoint(exp_lie(Z1, -t), Z2).matrix();
  const Mat2 d = fd - tangent;
  return std::max({std::abs(d.a), std::abs(d.b), std::abs(d.c), std::abs(d.d)});
}

GReport assemble_G(const LieVector& W, const GroupFunction& f, int n, const Sl2Element& p, double sigma, double t,
                   const Lemma61Options& opt) {
  if (W.gamma() == -W.beta()) throw SingularDenominator("assemble_G: requires γ ≠ -β");
  if (!(t > t0_threshold(W))) throw SingularDenominator("assemble_G: requires t > t0(W)");
  const Lemma61Report r = lemma61(W, f, n, p, sigma, t, opt);
  const Formulae fm = formulae(W, n, t, r);
  GReport g;
  g.assembled = fm.G;
  g.printed = fm.G_printed;
  g.direct = (r.U2f - kI * static_cast<double>(n) * r.Uf) * std::exp(t);
  g.relative_residual = rel(g.direct, g.assembled);
  return g;
}

std::string to_string(CaseTag c) {
  switch (c) {
    case CaseTag::Oscillatory: return "mu>1/4";
    case CaseTag::Real: return "0<mu<1/4";
    case CaseTag::Critical: return "mu=1/4";
    case CaseTag::NonPositive: return "mu<=0";
  }
  return "";
}

cplx spectral_nu(double mu) {
  const double d = 1.0 - 4.0 * mu;
  return d >= 0.0 ? cplx(std::sqrt(d), 0.0) : cplx(0.0, std::sqrt(-d));
}

OdeProblem OdeProblem::make(double mu, double t0, double t1, std::function<cplx(double)> G, cplx k1, cplx dk1) {
  OdeProblem p;
  p.mu = mu;
  p.nu = spectral_nu(mu);
  p.t0 = t0;
  p.t1 = t1;
  p.G = std::move(G);
  p.k1 = k1;
  p.dk1 = dk1;
  p.validate();
  return p;
}

void OdeProblem::validate() const {
  if (!std::isfinite(mu)) throw ValidationError("OdeProblem: mu must be finite");
  if (!(t1 > t0)) throw ValidationError("OdeProblem: requires t1 > t0");
  if (!G) throw ValidationError("OdeProblem: G missing");
  if (std::abs(1.0 - nu * nu - 4.0 * mu) > 1e-12 * std::max(1.0, std::abs(mu)))
    throw ValidationError("OdeProblem: nu does not satisfy 1 - nu^2 = 4 mu");
  const bool branch_ok = mu <= 0.25 ? (nu.imag() == 0.0 && nu.real() >= 0.0) : (nu.real() == 0.0 && nu.imag() > 0.0);
  if (!branch_ok) throw ValidationError("OdeProblem: nu on the wrong branch");
}

bool OdeProblem::critical() const { return std::abs(mu - 0.25) < 1e-8; }

CaseTag OdeProblem::case_tag() const {
  if (critical()) return CaseTag::Critical;
  if (mu <= 0.0) return CaseTag::NonPositive;
  return mu > 0.25 ? CaseTag::Oscillatory : CaseTag::Real;
}

ClosedForm::ClosedForm(OdeProblem prob) : prob_(std::move(prob)) {
  prob_.validate();
  const double t1 = prob_.t1;
  // Solve for the boundary values u = (c₁e^{r₁t₁}, c₂e^{r₂t₁}) so the conditioning reflects ν only.
  Eigen::Matrix2cd M;
  cplx e1, e2;
  if (prob_.critical()) {
    const double e = std::exp(-0.5 * t1);
    M << 1.0, t1, -0.5, 1.0 - 0.5 * t1;
    e1 = e2 = e;
  } else {
    const cplx r1 = -(1.0 - prob_.nu) / 2.0, r2 = -(1.0 + prob_.nu) / 2.0;
    M << 1.0, 1.0, r1, r2;
    e1 = std::exp(r1 * t1);
    e2 = std::exp(r2 * t1);
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(M);
  const double cond = svd.singularValues()(0) / svd.singularValues()(1);
  if (!(cond <= 1e10))
    throw IllConditionedInitialData("solve_closed_form: initial-data system has condition number " +
                                    std::to_string(cond));
  Eigen::Vector2cd rhs(prob_.k1, prob_.dk1);
  const Eigen::Vector2cd u = M.fullPivLu().solve(rhs);
  c1_ = u(0) / e1;
  c2_ = u(1) / e2;
}

ClosedForm::Inner ClosedForm::inner(double a, double b) const {
  Inner out{0.0, 0.0};
  if (b <= a) return out;
  const auto& G = prob_.G;
  const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 4.0)));
  const double w = (b - a) / pieces;
  if (prob_.critical()) {
    for (int j = 0; j < pieces; ++j) {
      const double lo = a + j * w, hi = a + (j + 1) * w;
      out.first += integrate_adaptive([&](double x) { return x * std::exp(-0.5 * x) * G(x); }, lo, hi, 1e-15, 1e-13).value;
      out.second += integrate_adaptive([&](double x) { return std::exp(-0.5 * x) * G(x); }, lo, hi, 1e-15, 1e-13).value;
    }
  } else {
    const cplx nu = prob_.nu;
    for (int j = 0; j < pieces; ++j) {
      const double lo = a + j * w, hi = a + (j + 1) * w;
      out.first += integrate_adaptive([&](double x) { return std::exp(-(1.0 + nu) * x / 2.0) * G(x); }, lo, hi, 1e-15, 1e-13).value;
      out.second += integrate_adaptive([&](double x) { return std::exp(-(1.0 - nu) * x / 2.0) * G(x); }, lo, hi, 1e-15, 1e-13).value;
    }
  }
  return out;
}

cplx ClosedForm::assemble(double t, const Inner& in, bool derivative) const {
  if (prob_.critical()) {
    const double e = std::exp(-0.5 * t);
    const cplx p = c1_ - in.first, q = c2_ + in.second;
    return derivative ? -0.5 * e * p + (1.0 - 0.5 * t) * e * q : e * p + t * e * q;
  }
  const cplx nu = prob_.nu;
  const cplx r1 = -(1.0 - nu) / 2.0, r2 = -(1.0 + nu) / 2.0;
  const cplx p = std::exp(r1 * t) * (c1_ + in.first / nu), q = std::exp(r2 * t) * (c2_ - in.second / nu);
  return derivative ? r1 * p + r2 * q : p + q;
}

cplx ClosedForm::value(double t) const {
  if (!(t > prob_.t0)) throw ValidationError("solve_closed_form: requires t > t0");
  return assemble(t, t >= prob_.t1 ? inner(prob_.t1, t) : Inner{-inner(t, prob_.t1).first, -inner(t, prob_.t1).second},
                  false);
}

cplx ClosedForm::derivative(double t) const {
  if (!(t > prob_.t0)) throw ValidationError("solve_closed_form: requires t > t0");
  Inner in = inner(std::min(t, prob_.t1), std::max(t, prob_.t1));
  if (t < prob_.t1) in = {-in.first, -in.second};
  return assemble(t, in, true);
}

std::vector<cplx> ClosedForm::values(const std::vector<double>& ts) const {
  std::vector<cplx> out;
  Inner acc{0.0, 0.0};
  double at = prob_.t1;
  for (double t : ts) {
    if (t < at) throw ValidationError("ClosedForm::values: grid must be ascending and >= t1");
    const Inner step = inner(at, t);
    acc.first += step.first;
    acc.second += step.second;
    at = t;
    out.push_back(assemble(t, acc, false));
  }
  return out;
}

cplx solve_closed_form(const OdeProblem& prob, double t) { return ClosedForm(prob).value(t); }

cplx leading_terms(const ExpansionCoefficients& c, const OdeProblem& prob, double t) {
  switch (c.tag) {
    case CaseTag::Critical:
      return std::exp(-0.5 * t) * (c.D_plus + t * c.D_minus);
    case CaseTag::Oscillatory: {
      const double r = 0.5 * prob.nu.imag();
      return std::exp(-0.5 * t) * (std::cos(r * t) * c.D_plus + std::sin(r * t) * c.D_minus);
    }
    default:
      return std::exp(-(1.0 + prob.nu) * t / 2.0) * c.D_plus + std::exp(-(1.0 - prob.nu) * t / 2.0) * c.D_minus;
  }
}

ExpansionCoefficients extract_coefficients(const OdeProblem& prob, const ExtractOptions& opt) {
  prob.validate();
  if (!(prob.mu > 0.0)) throw ValidationError("extract_coefficients: requires mu > 0");
  ExpansionCoefficients out;
  out.tag = prob.case_tag();

  const auto probe = linspace(prob.t1, prob.t1 + opt.probe_span, opt.probe_points);
  std::vector<double> mags;
  for (double t : probe) {
    const double m = std::abs(prob.G(t));
    if (!std::isfinite(m)) throw UnboundedG("extract_coefficients: G is not finite at t = " + std::to_string(t));
    mags.push_back(m);
  }
  out.sup_G = *std::max_element(mags.begin(), mags.end());
  const std::size_t decade = std::max<std::size_t>(2, mags.size() / 10);
  const bool rising = std::is_sorted(mags.end() - decade, mags.end()) && mags.back() > mags[mags.size() - decade];
  const double first_half = *std::max_element(mags.begin(), mags.begin() + mags.size() / 2);
  if (rising && mags.back() > 1.5 * first_half)
    throw UnboundedG("extract_coefficients: |G| keeps growing along the probe grid");

  // Tail cut where sup|G|·(1+T)e^{-rate·T} drops below the tolerance.
  const double rate = prob.critical() ? 0.5 : 0.5 * (1.0 - prob.nu.real());
  const double scale = std::max(out.sup_G, 1e-300);
  double T = prob.t1 + std::max(1.0, std::log(scale / opt.tail_tolerance) / rate);
  while (scale * (1.0 + T) * std::exp(-rate * T) > opt.tail_tolerance) T += 1.0 / rate;
  if (T - prob.t1 > 1e5) throw NumericalError("extract_coefficients: tail integral too long (mu close to 0)");
  out.tail_end = T;

  const ClosedForm sol(prob);
  cplx first = 0.0, second = 0.0;
  {
    const int pieces = std::max(1, static_cast<int>(std::ceil((T - prob.t1) / 4.0)));
    const double w = (T - prob.t1) / pieces;
    for (int j = 0; j < pieces; ++j) {
      const double lo = prob.t1 + j * w, hi = lo + w;
      if (prob.critical()) {
        first += integrate_adaptive([&](double x) { return x * std::exp(-0.5 * x) * prob.G(x); }, lo, hi, 1e-16, 1e-13).value;
        second += integrate_adaptive([&](double x) { return std::exp(-0.5 * x) * prob.G(x); }, lo, hi, 1e-16, 1e-13).value;
      } else {
        first += integrate_adaptive([&](double x) { return std::exp(-(1.0 + prob.nu) * x / 2.0) * prob.G(x); }, lo, hi, 1e-16, 1e-13).value;
        second += integrate_adaptive([&](double x) { return std::exp(-(1.0 - prob.nu) * x / 2.0) * prob.G(x); }, lo, hi, 1e-16, 1e-13).value;
      }
    }
  }
  if (prob.critical()) {
    out.D_plus = sol.c1() - first;
    out.D_minus = sol.c2() + second;
  } else {
    const cplx P = sol.c2() - second / prob.nu;  // coefficient of e^{-(1+ν)t/2}
    const cplx Q = sol.c1() + first / prob.nu;   // coefficient of e^{-(1-ν)t/2}
    if (out.tag == CaseTag::Oscillatory) {
      out.D_plus = P + Q;
      out.D_minus = kI * (Q - P);
    } else {
      out.D_plus = P;
      out.D_minus = Q;
    }
  }

  const auto grid = linspace(prob.t1 + opt.remainder_from, prob.t1 + opt.remainder_to, 81);
  const auto k = sol.values(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double env = (grid[i] + 1.0) * std::exp(-grid[i]);
    out.remainder_constant = std::max(out.remainder_constant, std::abs(k[i] - leading_terms(out, prob, grid[i])) / env);
  }
  return out;
}

}  // namespace equilab::ode
