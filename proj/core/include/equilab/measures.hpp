#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "equilab/fit.hpp"

namespace equilab::measures {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

/// Weight w(x) = 1 + g·(x - anchor) relative to the family's natural anchor point; normalized
/// to a probability measure. Must stay positive on the support.
struct AffineDensity {
  Vec gradient;  // empty means uniform
};

/// Circle {center + r(cos 2πu e1 + sin 2πu e2)} in R^d, u in [u0, u1]; full circle by default.
struct Circle {
  Vec center;
  double radius = 1.0;
  Vec e1, e2;  // orthonormal
  double u0 = 0.0, u1 = 1.0;
};

/// Round sphere S^{d-1} of the given radius in R^d, d >= 2.
struct Sphere {
  Vec center;
  double radius = 1.0;
};

/// Torus of revolution about the z-axis through `center` in R^3, area measure.
struct TorusOfRevolution {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double major_radius = 2.0;
  double minor_radius = 0.5;
};

/// Graph {(x, h(x)) : x in [x0, x1]} of a polynomial h in R^2 with arclength measure.
struct GraphCurve {
  std::vector<double> coefficients;  // h(x) = Σ c_k x^k
  double x0 = 0.0, x1 = 1.0;
};

using SurfaceFamily = std::variant<Circle, Sphere, TorusOfRevolution, GraphCurve>;

struct SurfaceMeasure {
  SurfaceFamily family;
  AffineDensity density;
};

/// Uniform measure on the open segment (0,1)v.
struct SegmentMeasure {
  Vec v;
};

struct AffineMap {
  Mat A;
  Vec b;
};

/// Self-affine measure μ = Σ p_j (F_j)_* μ with F_j(x) = A_j x + b_j.
struct IfsMeasure {
  std::vector<AffineMap> maps;
  std::vector<double> probabilities;
};

/// Uniform measure on u ↦ (cos 2πu, sin 2πu, u), u in [0,1], in R^3.
struct LiftedCircleMeasure {};

using MeasurePayload = std::variant<SurfaceMeasure, SegmentMeasure, IfsMeasure, LiftedCircleMeasure>;

/// Validated Borel probability measure on R^d.
class Measure {
 public:
  explicit Measure(MeasurePayload payload);

  static Measure circle(const Vec& center, double radius);
  static Measure circle(const Vec& center, double radius, const Vec& e1, const Vec& e2,
                        double u0 = 0.0, double u1 = 1.0, const Vec& density_gradient = {});
  static Measure sphere(const Vec& center, double radius, const Vec& density_gradient = {});
  static Measure torus_of_revolution(const Eigen::Vector3d& center, double major_radius,
                                     double minor_radius, const Vec& density_gradient = {});
  static Measure graph(std::vector<double> coefficients, double x0, double x1,
                       const Vec& density_gradient = {});
  static Measure segment(const Vec& v);
  static Measure ifs(std::vector<AffineMap> maps, std::vector<double> probabilities);
  static Measure lifted_circle();

  /// Illustrative planar presets: "sierpinski" and "rotation_rich".
  static Measure ifs_preset(const std::string& name);

  int dim() const { return dim_; }
  const MeasurePayload& payload() const { return payload_; }
  std::string type_name() const;

  /// Radius of a ball about the origin containing the support.
  double support_radius() const;

  /// Mass of the unnormalized density weight under the parametrization measure.
  double density_mass() const { return density_mass_; }

 private:
  MeasurePayload payload_;
  int dim_ = 0;
  double density_mass_ = 1.0;
};

struct Quadrature {
  int order = 20;
  double tolerance = 1e-11;
};
struct MonteCarlo {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 1;
};
struct IfsProduct {
  int depth = 12;
};
using FourierMethod = std::variant<Quadrature, MonteCarlo, IfsProduct>;

struct FourierQuery {
  Vec xi;
  FourierMethod method = Quadrature{};
};

struct FourierValue {
  cplx value;
  double error_estimate = 0.0;  // quadrature/truncation estimate, or MC standard error
};

/// μ̂(ξ) = ∫ e^{-2πi ξ·y} dμ(y).
FourierValue fourier_transform(const Measure& m, const FourierQuery& q);

/// Default method for the measure type (quadrature, or ifs_product for IFS measures).
cplx fourier_transform(const Measure& m, const Vec& xi);

/// Deterministic i.i.d.-style samples.
std::vector<Vec> sample(const Measure& m, std::size_t n, std::uint64_t seed);

/// Bounding ball radius max|b_j| / (1 - max‖A_j‖) of the attractor.
double ifs_bounding_radius(const IfsMeasure& ifs);
/// Largest operator norm among the maps.
double ifs_contraction(const IfsMeasure& ifs);

struct DecayFitOptions {
  FitMode mode = FitMode::Auto;
  std::size_t window = 5;
  unsigned jobs = 1;
};

/// Log-log fit of |μ̂(t·direction)| over t_grid.
AsymptoticFit decay_exponent_fit(const Measure& m, const Vec& direction,
                                 const std::vector<double>& t_grid,
                                 const DecayFitOptions& opt = {});

}  // namespace equilab::measures
