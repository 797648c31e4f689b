#pragma once

#include <complex>

#include "equilab/hyperdual.hpp"
#include "equilab/sl2.hpp"

namespace equilab {

/// Smooth complex function on SL(2,R), evaluable on plain and hyper-dual matrices.
class GroupFunction {
 public:
  virtual ~GroupFunction() = default;
  virtual std::complex<double> value(const Mat2& g) const = 0;
  virtual CplxT<HyperDual> value(const Mat2T<HyperDual>& g) const = 0;

  std::complex<double> operator()(const Sl2Element& g) const { return value(g.matrix()); }
};

/// f(g), (Zf)(g) and (Z²f)(g) for the left-invariant field Z.
struct LieJet {
  std::complex<double> value, first, second;
};

/// Exact via exp(εZ) = I + (ε1+ε2)Z + ε1ε2 Z² in hyper-dual arithmetic.
LieJet lie_jet(const GroupFunction& f, const Mat2& g, const LieVector& z);

/// (Z1 Z2 f)(g) = ∂²/∂s1∂s2 f(g exp(s1 Z1) exp(s2 Z2)) at 0.
std::complex<double> lie_mixed(const GroupFunction& f, const Mat2& g, const LieVector& z1,
                               const LieVector& z2);

/// Adapts a plain callable pair into a GroupFunction.
template <class Fn>
class LambdaFunction final : public GroupFunction {
 public:
  explicit LambdaFunction(Fn fn) : fn_(std::move(fn)) {}
  std::complex<double> value(const Mat2& g) const override { return to_std(fn_(g)); }
  CplxT<HyperDual> value(const Mat2T<HyperDual>& g) const override { return fn_(g); }

 private:
  Fn fn_;
};

template <class Fn>
LambdaFunction<Fn> make_group_function(Fn fn) {
  return LambdaFunction<Fn>(std::move(fn));
}

}  // namespace equilab
