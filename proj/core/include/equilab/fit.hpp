#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace equilab {

enum class FitMode { Auto, Raw, Envelope };
enum class FitAxis { LogLog, LogLinear };

struct FitWindow {
  std::string mode;  // "raw" or "envelope"
  std::string axis;  // "log-log" or "log-linear"
  std::size_t window_size = 5;
  std::size_t n_points = 0;
  double t_min = 0.0;
  double t_max = 0.0;
  bool oscillation_detected = false;
};

struct AsymptoticFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
  FitWindow window;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

/// Centered sliding maximum with the given (odd) window width; truncated at the ends.
std::vector<double> windowed_max(const std::vector<double>& v, std::size_t window);
std::vector<double> windowed_min(const std::vector<double>& v, std::size_t window);

/// True when the series has an interior strict local minimum.
bool is_oscillating(const std::vector<double>& v);

/// Fits log|v| against log t (LogLog) or against t (LogLinear). Auto picks the envelope when
/// the series oscillates. Throws DegenerateFit when every magnitude is below `floor`.
AsymptoticFit fit_decay(const std::vector<double>& t, const std::vector<double>& magnitudes,
                        FitAxis axis, FitMode mode = FitMode::Auto, std::size_t window = 5,
                        double floor = 1e-13);

}  // namespace equilab
