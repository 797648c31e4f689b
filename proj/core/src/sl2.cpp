#include "equilab/sl2.hpp"

#include <algorithm>
#include <cmath>

#include "equilab/error.hpp"

namespace equilab {

double frobenius_norm(const Mat2& m) {
  return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}

double accurate_det(const Mat2& m) {
  const double w = m.b * m.c;
  const double e = std::fma(-m.b, m.c, w);
  const double f = std::fma(m.a, m.d, -w);
  return f + e;
}

Sl2Element Sl2Element::renormalized(const Mat2& m) {
  const double det = accurate_det(m);
  if (std::abs(det - 1.0) <= kDetTolerance) return Sl2Element(m);
  const double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (scale > 1e7 || !(det > 0.0)) return Sl2Element(m);
  const double s = 1.0 / std::sqrt(det);
  return Sl2Element(Mat2{m.a * s, m.b * s, m.c * s, m.d * s});
}

Sl2Element Sl2Element::from_entries(double a, double b, double c, double d, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
    throw ValidationError("Sl2Element: non-finite entry");
  const Mat2 m{a, b, c, d};
  const double det = accurate_det(m);
  if (!(std::abs(det - 1.0) <= tol))
    throw ValidationError("Sl2Element: determinant " + std::to_string(det) + " is not 1");
  return renormalized(m);
}

Sl2Element operator*(const Sl2Element& x, const Sl2Element& y) {
  return Sl2Element::renormalized(x.m_ * y.m_);
}

UpperHalfPoint::UpperHalfPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw ValidationError("UpperHalfPoint: non-finite coordinate");
  if (!(y > 0.0)) throw ValidationError("UpperHalfPoint: y must be positive");
}

Sl2Element exp_lie(const LieVector& w, double s) {
  const double delta = 0.25 * w.a * w.a + w.b * w.c;
  const double x = s * s * delta;
  const Mat2 m = w.matrix();
  if (x > 0.25) {
    // Spectral form e^{sλ}P₊ + e^{-sλ}P₋; λ ± a/2 taken without cancellation.
    const double lam = std::sqrt(delta);
    const double ha = 0.5 * w.a;
    double p, q;  // λ + a/2 and λ - a/2, with p·q = bc
    if (ha >= 0.0) {
      p = lam + ha;
      q = w.b * w.c / p;
    } else {
      q = lam - ha;
      p = w.b * w.c / q;
    }
    const double ep = std::exp(s * lam), em = std::exp(-s * lam);
    const double inv = 0.5 / lam;
    const double sh = (ep - em) * inv;
    return Sl2Element::renormalized(
        Mat2{(ep * p + em * q) * inv, w.b * sh, w.c * sh, (ep * q + em * p) * inv});
  }
  double ch, sh;  // cosh(√x) and sinh(√x)/√x, continued analytically through x = 0
  if (std::abs(x) < 1e-10) {
    ch = 1.0 + x / 2.0 + x * x / 24.0;
    sh = 1.0 + x / 6.0 + x * x / 120.0;
  } else if (x > 0.0) {
    const double r = std::sqrt(x);
    ch = std::cosh(r);
    sh = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-x);
    ch = std::cos(r);
    sh = std::sin(r) / r;
  }
  const double k = sh * s;
  return Sl2Element::renormalized(Mat2{ch + k * m.a, k * m.b, k * m.c, ch + k * m.d});
}

LieVector adjoint(const Sl2Element& g, const LieVector& w) {
  const Mat2 m = g.matrix() * w.matrix() * g.inverse().matrix();
  return LieVector::from_matrix(m);
}

LieVector bracket(const LieVector& w1, const LieVector& w2) {
  const Mat2 x = w1.matrix(), y = w2.matrix();
  return LieVector::from_matrix(x * y - y * x);
}

UpperHalfPoint moebius(const Sl2Element& g, const UpperHalfPoint& z) {
  const std::complex<double> w = z.z();
  const std::complex<double> den = g.c() * w + g.d();
  const std::complex<double> num = g.a() * w + g.b();
  // Im((az+b)/(cz+d)) = y/|cz+d|² for det 1; computed directly to keep it positive.
  const double y = z.y() / std::norm(den);
  return {(num * std::conj(den)).real() / std::norm(den), y};
}

double hyperbolic_distance(const UpperHalfPoint& z1, const UpperHalfPoint& z2) {
  const double num = std::abs(z1.z() - z2.z());
  return 2.0 * std::asinh(num / (2.0 * std::sqrt(z1.y() * z2.y())));
}

UpperHalfPoint base_point(const Sl2Element& g) {
  const double r2 = g.c() * g.c() + g.d() * g.d();
  return {(g.a() * g.c() + g.b() * g.d()) / r2, 1.0 / r2};
}

Iwasawa iwasawa(const Sl2Element& g) {
  const double r2 = g.c() * g.c() + g.d() * g.d();
  return {(g.a() * g.c() + g.b() * g.d()) / r2, 1.0 / r2, std::atan2(-g.c(), g.d())};
}

Sl2Element from_iwasawa(double x, double y, double theta) {
  if (!(y > 0.0)) throw ValidationError("from_iwasawa: y must be positive");
  const double sy = std::sqrt(y);
  const Sl2Element n = Sl2Element::from_entries(1.0, x, 0.0, 1.0);
  const Sl2Element a = Sl2Element::from_entries(sy, 0.0, 0.0, 1.0 / sy);
  return n * a * exp_lie(lie::Theta, theta);
}

UpperHalfPoint hyperbolic_homothety(const UpperHalfPoint& x0, double t, const UpperHalfPoint& y) {
  if (!(t > 0.0)) throw ValidationError("hyperbolic_homothety: t must be positive");
  const double dist = hyperbolic_distance(x0, y);
  if (dist == 0.0) return x0;
  // Move x0 to i, read off the direction of y in the disk model, then walk the rotated
  // vertical geodesic. Avoids the boundary cancellation of the disk formula at large t·d.
  const double sy = std::sqrt(x0.y());
  const Sl2Element g = Sl2Element::from_entries(sy, x0.x() / sy, 0.0, 1.0 / sy);
  const std::complex<double> w = moebius(g.inverse(), y).z();
  const std::complex<double> i(0.0, 1.0);
  const double phi = std::arg((w - i) / (w + i));
  const double r = t * dist;
  const Sl2Element lift = g * exp_lie(lie::Theta, 0.5 * phi) * exp_lie(lie::X, r);
  return base_point(lift);
}

}  // namespace equilab
