#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "equilab/fuchsian.hpp"
#include "equilab/lie_derivative.hpp"

namespace equilab {

/// One bump on SL(2,R): b(q/q_r)·exp(-w(1 - cos 2(θ - θc))), q = cosh d(g·i, z_c) - 1, b(v) = exp(-v/(1-v)).
struct BumpSpec {
  UpperHalfPoint center{0.0, 1.0};
  double radius = 1.0;  // hyperbolic support radius of the base bump
  double fiber_angle = 0.0;
  double fiber_concentration = 1.0;
  std::complex<double> amplitude = 1.0;
};

/// ∫₀¹ exp(-v/(1-v)) dv.
double bump_profile_integral();

/// Single unperiodized bump ψ.
class BumpFunction final : public GroupFunction {
 public:
  explicit BumpFunction(BumpSpec spec);
  std::complex<double> value(const Mat2& g) const override;
  CplxT<HyperDual> value(const Mat2T<HyperDual>& g) const override;
  const BumpSpec& spec() const { return spec_; }
  /// ∫ψ over PSL(2,R) with dx dy/y² dθ, θ ∈ [0, π).
  std::complex<double> haar_integral() const;
  template <class T>
  CplxT<T> eval(const Mat2T<T>& g) const;

 private:
  BumpSpec spec_;
  double q_r_;
};

/// Γ-periodization f(g) = Σ_γ ψ(γg) of a sum of bumps.
class BundleObservable final : public GroupFunction {
 public:
  BundleObservable(std::shared_ptr<const fuchsian::FuchsianGroup> grp, std::vector<BumpSpec> bumps,
                   int extra_shells = 0);

  std::complex<double> value(const Mat2& g) const override;
  CplxT<HyperDual> value(const Mat2T<HyperDual>& g) const override;

  /// Mean over Γ\SL(2,R) by unfolding.
  std::complex<double> mean() const;
  const std::vector<BumpFunction>& bumps() const { return bumps_; }
  const fuchsian::FuchsianGroup& group() const { return *grp_; }
  /// Total number of Γ-terms kept across bumps.
  std::size_t term_count() const;

 private:
  template <class T>
  CplxT<T> sum_terms(const Mat2T<T>& reduced) const;
  std::shared_ptr<const fuchsian::FuchsianGroup> grp_;
  std::vector<BumpFunction> bumps_;
  std::vector<std::vector<Mat2>> terms_;  // per bump
};

/// Θ-eigenfunction F(x, y)·e^{inθ} with F a bump in (x, log y) around (x_c, y_c).
class EigenObservable final : public GroupFunction {
 public:
  EigenObservable(int n, double xc, double yc, double radius, std::complex<double> amplitude = 1.0);
  std::complex<double> value(const Mat2& g) const override;
  CplxT<HyperDual> value(const Mat2T<HyperDual>& g) const override;
  int weight() const { return n_; }

 private:
  template <class T>
  CplxT<T> eval(const Mat2T<T>& g) const;
  int n_;
  double xc_, log_yc_, r2_;
  std::complex<double> amp_;
};

}  // namespace equilab
