#include "equilab/observables.hpp"

#include <cmath>
#include <numbers>

#include "equilab/error.hpp"
#include "equilab/quadrature.hpp"

namespace equilab {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-v/(1-v)) on [0, 1), zero beyond.
template <class T>
T profile(const T& v) {
  using std::exp;
  if (!(value_of(v) < 1.0)) return T(0.0);
  return exp(-v / (T(1.0) - v));
}

}  // namespace

double bump_profile_integral() {
  static const double value = integrate_adaptive([](double v) { return std::complex<double>(profile(v)); }, 0.0, 1.0,
                                                 1e-15, 1e-14)
                                  .value.real();
  return value;
}

// ---------------------------------------------------------------- single bump

BumpFunction::BumpFunction(BumpSpec spec) : spec_(spec) {
  if (!(spec_.radius > 0.0) || !std::isfinite(spec_.radius)) throw ValidationError("bump: radius must be positive");
  if (!(spec_.fiber_concentration >= 0.0)) throw ValidationError("bump: fiber_concentration must be >= 0");
  q_r_ = std::cosh(spec_.radius) - 1.0;
}

template <class T>
CplxT<T> BumpFunction::eval(const Mat2T<T>& g) const {
  using std::exp;
  const auto iw = iwasawa_generic(g);
  const double xc = spec_.center.x(), yc = spec_.center.y();
  const T dx = iw.x - T(xc), dy = iw.y - T(yc);
  const T q = (dx * dx + dy * dy) / (T(2.0 * yc) * iw.y);
  const T base = profile(q / T(q_r_));
  if (value_of(base) == 0.0) return CplxT<T>(T(0.0), T(0.0));
  const CplxT<T> rot(T(std::cos(2.0 * spec_.fiber_angle)), T(-std::sin(2.0 * spec_.fiber_angle)));
  const CplxT<T> two = iw.phase * iw.phase * rot;
  const T fiber = exp(T(-spec_.fiber_concentration) * (T(1.0) - two.re));
  const T mag = base * fiber;
  return {mag * T(spec_.amplitude.real()), mag * T(spec_.amplitude.imag())};
}

std::complex<double> BumpFunction::value(const Mat2& g) const { return to_std(eval(g)); }
CplxT<HyperDual> BumpFunction::value(const Mat2T<HyperDual>& g) const { return eval(g); }

std::complex<double> BumpFunction::haar_integral() const {
  const double w = spec_.fiber_concentration;
  const double base = 2.0 * kPi * q_r_ * bump_profile_integral();
  const double fiber = kPi * std::exp(-w) * std::cyl_bessel_i(0.0, w);
  return spec_.amplitude * base * fiber;
}

// ---------------------------------------------------------------- Γ-periodization

BundleObservable::BundleObservable(std::shared_ptr<const fuchsian::FuchsianGroup> grp, std::vector<BumpSpec> bumps,
                                   int extra_shells)
    : grp_(std::move(grp)) {
  if (!grp_) throw ValidationError("BundleObservable: group required");
  if (bumps.empty()) throw ValidationError("BundleObservable: at least one bump required");
  if (extra_shells < 0) throw ValidationError("BundleObservable: extra_shells must be >= 0");
  const double rc = grp_->circumradius();
  const UpperHalfPoint z0 = grp_->center();
  for (const auto& spec : bumps) {
    bumps_.emplace_back(spec);
    // γ·g·i within the support forces d(γ·z0, z_c) ≤ r + circumradius.
    const double reach = spec.radius + rc + 0.05 + extra_shells;
    const double dc = hyperbolic_distance(z0, spec.center);
    std::vector<Mat2> kept;
    for (const auto& gamma : grp_->shell(dc + reach))
      if (hyperbolic_distance(moebius(gamma, z0), spec.center) <= reach) kept.push_back(gamma.matrix());
    terms_.push_back(std::move(kept));
  }
}

template <class T>
CplxT<T> BundleObservable::sum_terms(const Mat2T<T>& reduced) const {
  CplxT<T> s(T(0.0), T(0.0));
  for (std::size_t b = 0; b < bumps_.size(); ++b)
    for (const auto& gamma : terms_[b]) s += bumps_[b].eval(promote<T>(gamma) * reduced);
  return s;
}

std::complex<double> BundleObservable::value(const Mat2& g) const {
  const Sl2Element r = grp_->reduce_fast(Sl2Element::from_matrix(g));
  return to_std(sum_terms(r.matrix()));
}

CplxT<HyperDual> BundleObservable::value(const Mat2T<HyperDual>& g) const {
  const Mat2 plain{g.a.v, g.b.v, g.c.v, g.d.v};
  const auto r = grp_->reduce(Sl2Element::from_matrix(plain));
  return sum_terms(promote<HyperDual>(r.gamma.matrix()) * g);
}

std::complex<double> BundleObservable::mean() const {
  std::complex<double> s = 0.0;
  for (const auto& b : bumps_) s += b.haar_integral();
  return s / (grp_->area() * kPi);
}

std::size_t BundleObservable::term_count() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += t.size();
  return n;
}

// ---------------------------------------------------------------- Θ-eigenfunctions

EigenObservable::EigenObservable(int n, double xc, double yc, double radius, std::complex<double> amplitude)
    : n_(n), xc_(xc), amp_(amplitude) {
  if (!(yc > 0.0) || !std::isfinite(xc) || !std::isfinite(yc)) throw ValidationError("EigenObservable: invalid center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("EigenObservable: radius must be positive");
  log_yc_ = std::log(yc);
  r2_ = radius * radius;
}

template <class T>
CplxT<T> EigenObservable::eval(const Mat2T<T>& g) const {
  using std::log;
  const auto iw = iwasawa_generic(g);
  const T dx = iw.x - T(xc_), dl = log(iw.y) - T(log_yc_);
  const T env = profile((dx * dx + dl * dl) / T(r2_));
  if (value_of(env) == 0.0) return CplxT<T>(T(0.0), T(0.0));
  const CplxT<T> ph = unit_power(iw.phase, n_);
  return ph * CplxT<T>(env * T(amp_.real()), env * T(amp_.imag()));
}

std::complex<double> EigenObservable::value(const Mat2& g) const { return to_std(eval(g)); }
CplxT<HyperDual> EigenObservable::value(const Mat2T<HyperDual>& g) const { return eval(g); }

}  // namespace equilab
