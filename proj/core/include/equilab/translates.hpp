#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "equilab/fit.hpp"
#include "equilab/fuchsian.hpp"
#include "equilab/lie_derivative.hpp"

namespace equilab::translates {

using cplx = std::complex<double>;

struct TranslateConfig {
  LieVector W{0.0, 1.0, -1.0};
  double sigma = 1.0;
  Sl2Element p;
  std::vector<double> t_grid;
  int order = 16;
  /// Absent: work on SL(2,R) itself.
  std::shared_ptr<const fuchsian::FuchsianGroup> group;
  /// Use φ_{+t} instead of φ_{-t}; the relevant condition becomes c ≠ 0.
  bool positive_time = false;
  /// Target hyperbolic length of one quadrature panel.
  double panel_length = 0.5;
  unsigned jobs = 1;

  void validate() const;
  /// b ≠ 0 for φ_{-t} (c ≠ 0 for φ_{+t}); false means the no-equidistribution regime.
  bool stable_component() const;
};

/// Point p·exp(sW)·φ_{∓t} on the curve, unreduced.
Sl2Element curve_point(const TranslateConfig& cfg, double s, double t);

/// Integrand callback: writes n values at the group element g.
using MultiIntegrand = std::function<void(const Mat2& g, cplx* out)>;

struct CurveAverages {
  std::vector<cplx> values;  // (1/σ)∫₀^σ h_j(curve(s)) ds
  double quad_error = 0.0;   // max over j of |order-2n − order-n|
  std::size_t panels = 0;
};

/// Gauss-Legendre panel quadrature with interleaved reduction when a group is present.
CurveAverages curve_averages(const TranslateConfig& cfg, double t, std::size_t n, const MultiIntegrand& h);

struct TranslateValue {
  cplx value;
  double quad_error = 0.0;
  std::size_t panels = 0;
};

/// k(t) = (1/σ)∫₀^σ f(p·exp(sW)·exp(-tX)) ds.
TranslateValue translate_average(const TranslateConfig& cfg, const GroupFunction& f, double t);

struct DerivativeAverages {
  cplx k, dk, d2k;
  double quad_error = 0.0;
};

/// (k, k', k'') with k' = -(1/σ)∫Xf and k'' = (1/σ)∫X²f (signs flip for positive time).
DerivativeAverages derivative_averages(const TranslateConfig& cfg, const GroupFunction& f, double t);

struct FiniteDifferenceCheck {
  double dk_relative = 0.0;
  double d2k_relative = 0.0;
};

/// Compares analytic k', k'' against central differences of k with step h.
FiniteDifferenceCheck finite_difference_check(const TranslateConfig& cfg, const GroupFunction& f, double t,
                                              double h = 1e-4);

struct EnvelopeOptions {
  std::size_t window = 5;
  FitMode mode = FitMode::Auto;
  double floor = 1e-12;
};

struct ExpansionReport {
  std::vector<double> t;
  std::vector<cplx> k;
  std::vector<double> discrepancy;  // |k - m(f)|
  std::vector<double> quad_error;
  cplx mean;
  AsymptoticFit fit;
  double envelope_exponent = 0.0;  // slope of log envelope against t
  std::optional<double> frequency;
  double residual_rms = 0.0;
  bool stable_component = true;
  int order = 0;
  std::string assumption;
};

/// Log-linear envelope fit of |k - m| plus a periodogram frequency when the series oscillates.
ExpansionReport envelope_fit(const std::vector<double>& t, const std::vector<cplx>& k, cplx mean,
                             const EnvelopeOptions& opt = {});

/// Dominant angular frequency of a complex series by periodogram search on (0, π/Δt].
double dominant_frequency(const std::vector<double>& t, const std::vector<cplx>& z);

/// k(t) over cfg.t_grid, then envelope_fit.
ExpansionReport run_translates(const TranslateConfig& cfg, const GroupFunction& f, cplx mean,
                               const EnvelopeOptions& opt = {});

}  // namespace equilab::translates
