#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equilab/fit.hpp"
#include "equilab/measures.hpp"

namespace equilab::torus {

using measures::Mat;
using measures::Measure;
using measures::Vec;
using cplx = std::complex<double>;
using IVec = Eigen::VectorXi;

/// Lattice Γ = B·Z^d with dual Γ* = B^{-T}·Z^d.
class TorusLattice {
 public:
  explicit TorusLattice(const Mat& basis);
  static TorusLattice standard(int d);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Mat& basis() const { return basis_; }
  const Mat& inverse() const { return inverse_; }
  const Mat& dual_basis() const { return dual_; }

  /// η = B^{-T} k for integer coordinates k.
  Vec dual_vector(const IVec& k) const { return dual_ * k.cast<double>(); }
  /// frac(B^{-1} x), coordinates in [0,1)^d.
  Vec fractional(const Vec& x) const;
  /// Representative of x + Γ in the fundamental parallelepiped B·[0,1)^d.
  Vec project(const Vec& x) const { return basis_ * fractional(x); }

 private:
  Mat basis_, inverse_, dual_;
};

/// t ↦ A_t: identity, a fixed orthogonal matrix, or rotation by ω t + φ in coordinate plane (i, j).
class RotationPath {
 public:
  static RotationPath identity() { return {}; }
  static RotationPath constant(const Mat& q);
  static RotationPath planar(int i, int j, double omega, double phase);

  Mat at(double t, int d) const;
  std::string kind() const;

 private:
  enum class Kind { Identity, Constant, Planar } kind_ = Kind::Identity;
  Mat q_;
  int i_ = 0, j_ = 1;
  double omega_ = 0.0, phase_ = 0.0;
};

/// h_t(x) = x₀ + t·A_t(x - x₀) + b_t with b_t = b₀ + t·b₁.
class DilationFamily {
 public:
  DilationFamily(Vec center, RotationPath rotation, Vec offset0 = {}, Vec offset_rate = {});
  static DilationFamily homothety(int d) { return DilationFamily(Vec::Zero(d), RotationPath::identity()); }

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  Mat rotation(double t) const { return rotation_.at(t, dim()); }
  Vec offset(double t) const;
  Vec apply(const Vec& x, double t) const;

 private:
  Vec center_;
  RotationPath rotation_;
  Vec b0_, b1_;
};

struct FourierTerm {
  IVec k;  // coordinates in the dual basis
  cplx coefficient;
};

/// Trigonometric polynomial f(x) = Σ f̂(k) e^{2πi η_k·x}, finitely supported on Γ*.
class TorusObservable {
 public:
  explicit TorusObservable(std::vector<FourierTerm> terms, bool real_valued = false);

  static TorusObservable character(const IVec& k, cplx coefficient = 1.0);
  /// a·cos(2π η_k·x + φ) as the conjugate pair (a/2)e^{iφ} at k and its conjugate at -k.
  static TorusObservable cosine(const IVec& k, double amplitude = 1.0, double phase = 0.0);
  TorusObservable operator+(const TorusObservable& other) const;

  int dim() const { return dim_; }
  const std::vector<FourierTerm>& terms() const { return terms_; }
  bool real_valued() const { return real_; }
  cplx constant_term() const;
  /// ℓ¹ norm of the nonzero-frequency coefficients.
  double l1_norm() const;
  cplx evaluate(const TorusLattice& lattice, const Vec& x) const;

 private:
  std::vector<FourierTerm> terms_;
  int dim_ = 0;
  bool real_ = false;
};

/// Exact finite-sum discrepancy ∫f dm_t - ∫f dm_T.
cplx discrepancy_series(const Measure& m, const TorusLattice& lat, const DilationFamily& dil,
                        const TorusObservable& f, double t,
                        const std::optional<measures::FourierMethod>& method = std::nullopt);

struct MonteCarloEstimate {
  cplx value;
  double standard_error = 0.0;
  std::size_t n = 0;
};

/// (1/n) Σ f(π(h_t(x_i))) - f̂(0) over samples of m.
MonteCarloEstimate discrepancy_monte_carlo(const Measure& m, const TorusLattice& lat,
                                           const DilationFamily& dil, const TorusObservable& f,
                                           double t, std::size_t n, std::uint64_t seed);

enum class RayVerdict { Decays, Stalls, Inconclusive };
std::string to_string(RayVerdict v);

struct RayTestOptions {
  double stall_threshold = 0.1;
  double decay_ratio = 0.1;
  std::size_t window = 5;
  unsigned jobs = 1;
};

struct RayResult {
  IVec ray;
  RayVerdict verdict = RayVerdict::Inconclusive;
  std::vector<double> magnitudes;  // |μ̂(t η_N)| on the grid
  double first_decade_max = 0.0;
  double last_decade_min = 0.0;
  double last_decade_max = 0.0;
};

std::vector<RayResult> integral_ray_decay_test(const Measure& m, const TorusLattice& lat,
                                               const std::vector<IVec>& rays,
                                               const std::vector<double>& t_grid,
                                               const RayTestOptions& opt = {});

struct RateFitOptions {
  FitMode mode = FitMode::Auto;
  std::size_t window = 5;
  /// Exponent used for the reported constant; defaults to the negated fitted slope.
  std::optional<double> decay_rate;
  unsigned jobs = 1;
};

struct RateFit {
  AsymptoticFit fit;
  double l1_norm = 0.0;
  double decay_rate = 0.0;
  /// max over the grid of |disc|·t^{rate}/‖f̂‖₁.
  double constant = 0.0;
  std::vector<double> t;
  std::vector<cplx> discrepancy;
};

/// Summarizes a discrepancy series already computed on t.
RateFit summarize_rate(std::vector<double> t, std::vector<cplx> disc, double l1_norm,
                       const RateFitOptions& opt);

RateFit equidistribution_rate_fit(const Measure& m, const TorusLattice& lat,
                                  const DilationFamily& dil, const TorusObservable& f,
                                  const std::vector<double>& t_grid, const RateFitOptions& opt = {});

void validate_grid(const std::vector<double>& t_grid, double min_decades, const char* who);

}  // namespace equilab::torus
