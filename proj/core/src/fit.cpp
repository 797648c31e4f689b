#include "equilab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "equilab/error.hpp"

namespace equilab {

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DegenerateFit("least_squares_line: need >= 2 paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateFit("least_squares_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

namespace {

template <class Pick>
std::vector<double> windowed(const std::vector<double>& v, std::size_t window, Pick pick) {
  const std::size_t half = window / 2;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half);
    double m = v[lo];
    for (std::size_t j = lo + 1; j <= hi; ++j) m = pick(m, v[j]);
    out[i] = m;
  }
  return out;
}

}  // namespace

std::vector<double> windowed_max(const std::vector<double>& v, std::size_t window) {
  return windowed(v, window, [](double a, double b) { return std::max(a, b); });
}

std::vector<double> windowed_min(const std::vector<double>& v, std::size_t window) {
  return windowed(v, window, [](double a, double b) { return std::min(a, b); });
}

bool is_oscillating(const std::vector<double>& v) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] < v[i - 1] && v[i] < v[i + 1]) return true;
  return false;
}

AsymptoticFit fit_decay(const std::vector<double>& t, const std::vector<double>& magnitudes,
                        FitAxis axis, FitMode mode, std::size_t window, double floor) {
  if (t.size() != magnitudes.size() || t.size() < 2)
    throw DegenerateFit("fit_decay: need >= 2 paired samples");
  if (std::all_of(magnitudes.begin(), magnitudes.end(), [&](double m) { return !(m >= floor); }))
    throw DegenerateFit("fit_decay: all magnitudes below floor");

  AsymptoticFit out;
  out.window.oscillation_detected = is_oscillating(magnitudes);
  const bool envelope = mode == FitMode::Envelope || (mode == FitMode::Auto && out.window.oscillation_detected);
  const std::vector<double> series = envelope ? windowed_max(magnitudes, window) : magnitudes;

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(series[i] >= floor)) continue;
    xs.push_back(axis == FitAxis::LogLog ? std::log(t[i]) : t[i]);
    ys.push_back(std::log(series[i]));
  }
  const LineFit line = least_squares_line(xs, ys);
  out.slope = line.slope;
  out.intercept = line.intercept;
  out.residual_rms = line.residual_rms;
  out.window.mode = envelope ? "envelope" : "raw";
  out.window.axis = axis == FitAxis::LogLog ? "log-log" : "log-linear";
  out.window.window_size = envelope ? window : 1;
  out.window.n_points = xs.size();
  out.window.t_min = *std::min_element(t.begin(), t.end());
  out.window.t_max = *std::max_element(t.begin(), t.end());
  return out;
}

}  // namespace equilab
