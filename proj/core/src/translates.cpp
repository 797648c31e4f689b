#include "equilab/translates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "equilab/error.hpp"
#include "equilab/parallel.hpp"
#include "equilab/quadrature.hpp"

namespace equilab::translates {

namespace {

double flow_sign(const TranslateConfig& cfg) { return cfg.positive_time ? 1.0 : -1.0; }

// Ad_{exp(-sign·t X)} W: a fixed, b scaled by e^{-sign t}, c by e^{sign t}.
LieVector translated_field(const TranslateConfig& cfg, double t) {
  const double e = std::exp(-flow_sign(cfg) * t);
  return {cfg.W.a, cfg.W.b * e, cfg.W.c / e};
}

std::size_t panel_count(const TranslateConfig& cfg, double t) {
  const LieVector w = translated_field(cfg, t);
  const double speed = std::sqrt(w.a * w.a + w.b * w.b + w.c * w.c);
  const double n = std::ceil(cfg.sigma * speed / cfg.panel_length);
  if (!(n < 5e7)) throw NumericalError("translate_average: curve too long to resolve (t too large)");
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

Sl2Element anchor(const TranslateConfig& cfg, double s, double t) {
  const Sl2Element start = cfg.p * exp_lie(cfg.W, s);
  if (!cfg.group) return start * exp_lie(lie::X, flow_sign(cfg) * t);
  return fuchsian::flow_reduce(*cfg.group, start, flow_sign(cfg) * t);
}

}  // namespace

void TranslateConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("translates: sigma must be positive");
  if (order < 16) throw ValidationError("translates: quadrature order must be >= 16");
  if (!(panel_length > 0.0)) throw ValidationError("translates: panel_length must be positive");
  if (!std::isfinite(W.a) || !std::isfinite(W.b) || !std::isfinite(W.c))
    throw ValidationError("translates: W must be finite");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!std::isfinite(t_grid[i]) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw ValidationError("translates: t_grid must be finite and increasing");
}

bool TranslateConfig::stable_component() const { return positive_time ? W.c != 0.0 : W.b != 0.0; }

Sl2Element curve_point(const TranslateConfig& cfg, double s, double t) {
  return cfg.p * exp_lie(cfg.W, s) * exp_lie(lie::X, flow_sign(cfg) * t);
}

CurveAverages curve_averages(const TranslateConfig& cfg, double t, std::size_t n, const MultiIntegrand& h) {
  cfg.validate();
  const std::size_t panels = panel_count(cfg, t);
  const double width = cfg.sigma / static_cast<double>(panels);
  const LieVector wt = translated_field(cfg, t);
  const auto& lo = gauss_legendre(cfg.order);
  const auto& hi = gauss_legendre(2 * cfg.order);

  struct Partial {
    std::vector<cplx> lo, hi;
  };
  const std::size_t jobs = std::max(1u, cfg.jobs);
  const std::size_t chunk = (panels + jobs - 1) / jobs;
  auto parts = parallel_map(jobs, cfg.jobs, [&](std::size_t c) {
    Partial acc{std::vector<cplx>(n, 0.0), std::vector<cplx>(n, 0.0)};
    std::vector<cplx> buf(n);
    for (std::size_t j = c * chunk; j < std::min(panels, (c + 1) * chunk); ++j) {
      const double s0 = j * width;
      const Mat2 a = anchor(cfg, s0, t).matrix();
      auto run = [&](const auto& rule, std::vector<cplx>& into) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          const double u = 0.5 * width * (rule.nodes[q] + 1.0);
          h(a * exp_lie(wt, u).matrix(), buf.data());
          const double w = 0.5 * width * rule.weights[q];
          for (std::size_t m = 0; m < n; ++m) into[m] += w * buf[m];
        }
      };
      run(lo, acc.lo);
      run(hi, acc.hi);
    }
    return acc;
  });
  CurveAverages out;
  out.values.assign(n, 0.0);
  std::vector<cplx> low(n, 0.0);
  for (const auto& p : parts)
    for (std::size_t m = 0; m < n; ++m) {
      out.values[m] += p.hi[m] / cfg.sigma;
      low[m] += p.lo[m] / cfg.sigma;
    }
  for (std::size_t m = 0; m < n; ++m) out.quad_error = std::max(out.quad_error, std::abs(out.values[m] - low[m]));
  out.panels = panels;
  return out;
}

TranslateValue translate_average(const TranslateConfig& cfg, const GroupFunction& f, double t) {
  const auto r = curve_averages(cfg, t, 1, [&](const Mat2& g, cplx* out) { out[0] = f.value(g); });
  return {r.values[0], r.quad_error, r.panels};
}

DerivativeAverages derivative_averages(const TranslateConfig& cfg, const GroupFunction& f, double t) {
  const auto r = curve_averages(cfg, t, 3, [&](const Mat2& g, cplx* out) {
    const LieJet j = lie_jet(f, g, lie::X);
    out[0] = j.value;
    out[1] = j.first;
    out[2] = j.second;
  });
  const double sgn = flow_sign(cfg);
  return {r.values[0], sgn * r.values[1], r.values[2], r.quad_error};
}

FiniteDifferenceCheck finite_difference_check(const TranslateConfig& cfg, const GroupFunction& f, double t,
                                              double h) {
  const auto d = derivative_averages(cfg, f, t);
  const cplx kp = translate_average(cfg, f, t + h).value;
  const cplx km = translate_average(cfg, f, t - h).value;
  const cplx fd1 = (kp - km) / (2.0 * h);
  const cplx fd2 = (kp - 2.0 * d.k + km) / (h * h);
  const double s1 = std::max({std::abs(d.dk), std::abs(d.k), 1e-3});
  const double s2 = std::max({std::abs(d.d2k), std::abs(d.dk), std::abs(d.k), 1e-3});
  return {std::abs(fd1 - d.dk) / s1, std::abs(fd2 - d.d2k) / s2};
}

double dominant_frequency(const std::vector<double>& t, const std::vector<cplx>& z) {
  if (t.size() < 4 || t.size() != z.size()) throw DegenerateFit("dominant_frequency: need >= 4 paired samples");
  double dt = INFINITY;
  for (std::size_t i = 1; i < t.size(); ++i) dt = std::min(dt, t[i] - t[i - 1]);
  const double span = t.back() - t.front();
  const double omega_max = std::numbers::pi / dt;
  cplx mean = 0.0;
  for (const auto& v : z) mean += v;
  mean /= static_cast<double>(z.size());
  auto power = [&](double w) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += (z[i] - mean) * std::polar(1.0, -w * t[i]);
    return std::norm(s);
  };
  // Scan both signs: a complex series can carry e^{irt} and e^{-irt} with different weights.
  const std::size_t n = static_cast<std::size_t>(std::ceil(20.0 * omega_max * span / std::numbers::pi)) + 50;
  double best_w = 0.0, best_p = -1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = omega_max * static_cast<double>(i) / static_cast<double>(n);
    for (double sw : {w, -w}) {
      const double p = power(sw);
      if (p > best_p) {
        best_p = p;
        best_w = sw;
      }
    }
  }
  // Golden-section polish around the grid maximum.
  const double step = omega_max / static_cast<double>(n);
  double a = best_w - step, b = best_w + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (power(c) > power(d)) b = d;
    else a = c;
  }
  return std::abs(0.5 * (a + b));
}

ExpansionReport envelope_fit(const std::vector<double>& t, const std::vector<cplx>& k, cplx mean,
                             const EnvelopeOptions& opt) {
  if (t.size() != k.size() || t.size() < 4) throw ValidationError("envelope_fit: need >= 4 paired samples");
  if (t.back() - t.front() < 6.0 - 1e-12) throw ValidationError("envelope_fit: t_grid must span >= 6 units");
  ExpansionReport r;
  r.t = t;
  r.k = k;
  r.mean = mean;
  for (const auto& v : k) r.discrepancy.push_back(std::abs(v - mean));
  if (std::all_of(r.discrepancy.begin(), r.discrepancy.end(), [&](double d) { return d < opt.floor; }))
    throw DegenerateFit("envelope_fit: discrepancy below 1e-12 throughout");
  r.fit = fit_decay(t, r.discrepancy, FitAxis::LogLinear, opt.mode, opt.window, opt.floor);
  r.envelope_exponent = r.fit.slope;
  r.residual_rms = r.fit.residual_rms;
  if (r.fit.window.oscillation_detected && std::isfinite(r.fit.slope)) {
    std::vector<cplx> z;
    for (std::size_t i = 0; i < t.size(); ++i) z.push_back((k[i] - mean) * std::exp(-r.fit.slope * t[i]));
    r.frequency = dominant_frequency(t, z);
  }
  if (!std::isfinite(r.envelope_exponent)) throw DegenerateFit("envelope_fit: non-finite exponent");
  return r;
}

ExpansionReport run_translates(const TranslateConfig& cfg, const GroupFunction& f, cplx mean,
                               const EnvelopeOptions& opt) {
  cfg.validate();
  const auto vals = parallel_map(cfg.t_grid.size(), cfg.jobs,
                                 [&](std::size_t i) { return translate_average(cfg, f, cfg.t_grid[i]); });
  std::vector<cplx> k;
  std::vector<double> err;
  for (const auto& v : vals) {
    k.push_back(v.value);
    err.push_back(v.quad_error);
  }
  ExpansionReport r = envelope_fit(cfg.t_grid, k, mean, opt);
  r.quad_error = std::move(err);
  r.stable_component = cfg.stable_component();
  r.order = cfg.order;
  if (cfg.group)
    r.assumption = "envelope rate e^{-t/2} presumes the smallest positive Laplace eigenvalue of " + cfg.group->name() +
                   " exceeds 1/4; the spectrum is not computed here";
  return r;
}

}  // namespace equilab::translates
