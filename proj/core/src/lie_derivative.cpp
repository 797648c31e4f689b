#include "equilab/lie_derivative.hpp"

namespace equilab {

LieJet lie_jet(const GroupFunction& f, const Mat2& g, const LieVector& z) {
  const Mat2 zm = z.matrix();
  const Mat2 z2 = zm * zm;
  auto entry = [](double i, double first, double second) {
    return HyperDual(i, first, first, second);
  };
  const Mat2T<HyperDual> step{entry(1.0, zm.a, z2.a), entry(0.0, zm.b, z2.b),
                              entry(0.0, zm.c, z2.c), entry(1.0, zm.d, z2.d)};
  const CplxT<HyperDual> r = f.value(promote<HyperDual>(g) * step);
  return {{r.re.v, r.im.v}, {r.re.e1, r.im.e1}, {r.re.e12, r.im.e12}};
}

std::complex<double> lie_mixed(const GroupFunction& f, const Mat2& g, const LieVector& z1,
                               const LieVector& z2) {
  const Mat2 m1 = z1.matrix(), m2 = z2.matrix();
  const Mat2T<HyperDual> s1{HyperDual(1.0, m1.a, 0, 0), HyperDual(0.0, m1.b, 0, 0),
                            HyperDual(0.0, m1.c, 0, 0), HyperDual(1.0, m1.d, 0, 0)};
  const Mat2T<HyperDual> s2{HyperDual(1.0, 0, m2.a, 0), HyperDual(0.0, 0, m2.b, 0),
                            HyperDual(0.0, 0, m2.c, 0), HyperDual(1.0, 0, m2.d, 0)};
  const CplxT<HyperDual> r = f.value(promote<HyperDual>(g) * s1 * s2);
  return {r.re.e12, r.im.e12};
}

}  // namespace equilab
