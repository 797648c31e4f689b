#pragma once

#include <cmath>
#include <complex>

namespace equilab {

/// Hyper-dual number v + e1*ε1 + e2*ε2 + e12*ε1ε2 with ε1² = ε2² = 0. Propagating it through a
/// smooth function yields exact first and mixed second derivatives.
struct HyperDual {
  double v = 0.0, e1 = 0.0, e2 = 0.0, e12 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr HyperDual(double value, double d1, double d2, double d12)
      : v(value), e1(d1), e2(d2), e12(d12) {}

  HyperDual& operator+=(const HyperDual& o) {
    v += o.v, e1 += o.e1, e2 += o.e2, e12 += o.e12;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    v -= o.v, e1 -= o.e1, e2 -= o.e2, e12 -= o.e12;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }
  HyperDual& operator/=(const HyperDual& o) { return *this = *this / o; }

  friend HyperDual operator-(const HyperDual& a) { return {-a.v, -a.e1, -a.e2, -a.e12}; }
  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.v * b.v, a.v * b.e1 + a.e1 * b.v, a.v * b.e2 + a.e2 * b.v,
            a.v * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.v};
  }
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b) {
    const double inv = 1.0 / b.v;
    const HyperDual r{inv, -b.e1 * inv * inv, -b.e2 * inv * inv,
                      (2.0 * b.e1 * b.e2 * inv - b.e12) * inv * inv};
    return a * r;
  }
};

namespace hd_detail {
// Applies a scalar function given its value and first two derivatives at a.v.
inline HyperDual chain(const HyperDual& a, double f0, double f1, double f2) {
  return {f0, f1 * a.e1, f1 * a.e2, f1 * a.e12 + f2 * a.e1 * a.e2};
}
}  // namespace hd_detail

inline HyperDual exp(const HyperDual& a) {
  const double e = std::exp(a.v);
  return hd_detail::chain(a, e, e, e);
}
inline HyperDual log(const HyperDual& a) {
  return hd_detail::chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline HyperDual sqrt(const HyperDual& a) {
  const double s = std::sqrt(a.v);
  return hd_detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline HyperDual sin(const HyperDual& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return hd_detail::chain(a, s, c, -s);
}
inline HyperDual cos(const HyperDual& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return hd_detail::chain(a, c, -s, -c);
}
inline HyperDual pow(const HyperDual& a, int n) {
  if (n == 0) return HyperDual(1.0);
  const double p2 = n >= 2 || n < 0 ? std::pow(a.v, n - 2) : 0.0;
  const double p1 = std::pow(a.v, n - 1);
  return hd_detail::chain(a, p1 * a.v, n * p1, n * (n - 1.0) * p2);
}

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.v; }

/// Minimal complex number over an arbitrary real scalar type.
template <class T>
struct CplxT {
  T re{}, im{};

  CplxT() = default;
  CplxT(T r, T i) : re(r), im(i) {}
  CplxT(const T& r) : re(r), im(0.0) {}  // NOLINT(google-explicit-constructor)

  friend CplxT operator+(const CplxT& a, const CplxT& b) { return {a.re + b.re, a.im + b.im}; }
  friend CplxT operator-(const CplxT& a, const CplxT& b) { return {a.re - b.re, a.im - b.im}; }
  friend CplxT operator*(const CplxT& a, const CplxT& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CplxT operator*(const CplxT& a, const T& s) { return {a.re * s, a.im * s}; }
  friend CplxT operator*(const T& s, const CplxT& a) { return {a.re * s, a.im * s}; }
  CplxT& operator+=(const CplxT& o) {
    re += o.re, im += o.im;
    return *this;
  }
};

template <class T>
CplxT<T> conj(const CplxT<T>& z) {
  return {z.re, -z.im};
}

/// Integer power by repeated squaring; negative powers require |z| = 1 and use the conjugate.
template <class T>
CplxT<T> unit_power(CplxT<T> z, int n) {
  if (n < 0) {
    z = conj(z);
    n = -n;
  }
  CplxT<T> out(T(1.0), T(0.0));
  while (n > 0) {
    if (n & 1) out = out * z;
    z = z * z;
    n >>= 1;
  }
  return out;
}

inline std::complex<double> to_std(const CplxT<double>& z) { return {z.re, z.im}; }

}  // namespace equilab
