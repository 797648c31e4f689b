#pragma once

#include <complex>

#include "equilab/hyperdual.hpp"

namespace equilab {

/// 2x2 matrix over a scalar type, row-major entries.
template <class T>
struct Mat2T {
  T a{}, b{}, c{}, d{};

  static Mat2T identity() { return {T(1.0), T(0.0), T(0.0), T(1.0)}; }

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }

  friend Mat2T operator*(const Mat2T& x, const Mat2T& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2T operator+(const Mat2T& x, const Mat2T& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2T operator-(const Mat2T& x, const Mat2T& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend Mat2T operator*(const T& s, const Mat2T& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

using Mat2 = Mat2T<double>;

template <class T, class S>
Mat2T<T> promote(const Mat2T<S>& m) {
  return {T(m.a), T(m.b), T(m.c), T(m.d)};
}

double frobenius_norm(const Mat2& m);

/// ad - bc with a single rounding (Kahan's fma formulation).
double accurate_det(const Mat2& m);

/// Element of sl(2,R) with coordinates (a, b, c) in the basis {X, U, V}:
/// X = diag(1/2, -1/2), U = [[0,1],[0,0]], V = [[0,0],[1,0]].
struct LieVector {
  double a = 0.0, b = 0.0, c = 0.0;

  /// From coordinates in the basis {X, Θ, R} with Θ = U - V and R = U + V.
  static LieVector from_xtr(double alpha, double beta, double gamma) {
    return {alpha, beta + gamma, gamma - beta};
  }
  /// Inverse of matrix(): reads a traceless matrix.
  static LieVector from_matrix(const Mat2& m) { return {m.a - m.d, m.b, m.c}; }

  double alpha() const { return a; }
  double beta() const { return 0.5 * (b - c); }
  double gamma() const { return 0.5 * (b + c); }

  Mat2 matrix() const { return {0.5 * a, b, c, -0.5 * a}; }

  /// Stable-direction coefficient condition b != 0 (equivalently γ != -β).
  bool has_stable_component(double tol = 0.0) const { return std::abs(b) > tol; }

  friend LieVector operator+(const LieVector& x, const LieVector& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c};
  }
  friend LieVector operator-(const LieVector& x, const LieVector& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c};
  }
  friend LieVector operator*(double s, const LieVector& x) { return {s * x.a, s * x.b, s * x.c}; }
};

namespace lie {
inline constexpr LieVector X{1.0, 0.0, 0.0};
inline constexpr LieVector U{0.0, 1.0, 0.0};
inline constexpr LieVector V{0.0, 0.0, 1.0};
inline constexpr LieVector Theta{0.0, 1.0, -1.0};
inline constexpr LieVector R{0.0, 1.0, 1.0};
}  // namespace lie

/// Element of SL(2,R). Products renormalize by sqrt(det) whenever |det - 1| > 1e-12.
/// Once entries grow past ~1e7 the stored determinant is dominated by entry rounding and is no
/// longer a meaningful drift signal; renormalization is then skipped.
struct LieVector;
class Sl2Element;
Sl2Element exp_lie(const LieVector& w, double s);

class Sl2Element {
 public:
  static constexpr double kDetTolerance = 1e-12;

  Sl2Element() : m_(Mat2::identity()) {}

  /// Accepts entries whose determinant is within `tol` of 1 and renormalizes them.
  /// Throws ValidationError otherwise or on non-finite input.
  static Sl2Element from_entries(double a, double b, double c, double d, double tol = 1e-9);
  static Sl2Element from_matrix(const Mat2& m, double tol = 1e-9) {
    return from_entries(m.a, m.b, m.c, m.d, tol);
  }

  const Mat2& matrix() const { return m_; }
  double a() const { return m_.a; }
  double b() const { return m_.b; }
  double c() const { return m_.c; }
  double d() const { return m_.d; }
  double det() const { return accurate_det(m_); }
  double trace() const { return m_.trace(); }

  Sl2Element inverse() const { return Sl2Element(Mat2{m_.d, -m_.b, -m_.c, m_.a}); }
  Sl2Element operator-() const { return Sl2Element(Mat2{-m_.a, -m_.b, -m_.c, -m_.d}); }

  friend Sl2Element operator*(const Sl2Element& x, const Sl2Element& y);
  friend Sl2Element exp_lie(const LieVector& w, double s);

 private:
  explicit Sl2Element(const Mat2& m) : m_(m) {}
  static Sl2Element renormalized(const Mat2& m);
  Mat2 m_;
};

/// Point of the upper half-plane; construction rejects y <= 0 and non-finite input.
class UpperHalfPoint {
 public:
  UpperHalfPoint(double x, double y);
  static UpperHalfPoint from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }

  double x() const { return x_; }
  double y() const { return y_; }
  std::complex<double> z() const { return {x_, y_}; }

 private:
  double x_, y_;
};

/// exp(sW) in closed form from W² = δ·I with δ = a²/4 + bc.
Sl2Element exp_lie(const LieVector& w, double s);

LieVector adjoint(const Sl2Element& g, const LieVector& w);
LieVector bracket(const LieVector& w1, const LieVector& w2);

UpperHalfPoint moebius(const Sl2Element& g, const UpperHalfPoint& z);
double hyperbolic_distance(const UpperHalfPoint& z1, const UpperHalfPoint& z2);

/// Point on the geodesic ray from x0 through y at distance t·d(x0, y) from x0.
UpperHalfPoint hyperbolic_homothety(const UpperHalfPoint& x0, double t, const UpperHalfPoint& y);

/// Base point g·i.
UpperHalfPoint base_point(const Sl2Element& g);

/// Iwasawa coordinates g = n(x) a(y) k(θ) with k(θ) = exp(θΘ).
struct Iwasawa {
  double x = 0.0, y = 1.0, theta = 0.0;
};
Iwasawa iwasawa(const Sl2Element& g);
Sl2Element from_iwasawa(double x, double y, double theta);

/// Scalar-generic pieces of the Iwasawa decomposition, used by observables.
template <class T>
struct IwasawaT {
  T x, y;
  CplxT<T> phase;  // e^{iθ}
};

template <class T>
IwasawaT<T> iwasawa_generic(const Mat2T<T>& g) {
  using std::sqrt;
  const T r2 = g.c * g.c + g.d * g.d;
  const T inv = T(1.0) / r2;
  const T r = sqrt(r2);
  return {(g.a * g.c + g.b * g.d) * inv, inv, CplxT<T>(g.d / r, -(g.c / r))};
}

}  // namespace equilab
