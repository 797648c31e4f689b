#include "equilab/measures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "equilab/error.hpp"
#include "equilab/parallel.hpp"
#include "equilab/quadrature.hpp"

namespace equilab::measures {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

double poly(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

double poly_derivative(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) r = r * x + static_cast<double>(k) * c[k];
  return r;
}

bool has_density(const AffineDensity& d) { return d.gradient.size() > 0; }

double weight(const AffineDensity& d, const Vec& offset) {
  return has_density(d) ? 1.0 + d.gradient.dot(offset) : 1.0;
}

Vec circle_point(const Circle& c, double u) {
  return c.center + c.radius * (std::cos(kTwoPi * u) * c.e1 + std::sin(kTwoPi * u) * c.e2);
}

Eigen::Vector3d torus_point(const TorusOfRevolution& t, double u, double v) {
  const double s = t.major_radius + t.minor_radius * std::cos(kTwoPi * v);
  return t.center + Eigen::Vector3d(s * std::cos(kTwoPi * u), s * std::sin(kTwoPi * u),
                                    t.minor_radius * std::sin(kTwoPi * v));
}

Vec graph_anchor(const GraphCurve& g) {
  const double xm = 0.5 * (g.x0 + g.x1);
  Vec a(2);
  a << xm, poly(g.coefficients, xm);
  return a;
}

Vec graph_point(const GraphCurve& g, double x) {
  Vec p(2);
  p << x, poly(g.coefficients, x);
  return p;
}

double graph_speed(const GraphCurve& g, double x) {
  const double h = poly_derivative(g.coefficients, x);
  return std::sqrt(1.0 + h * h);
}

double real_integral(const std::function<double(double)>& f, double a, double b) {
  return integrate_adaptive([&](double x) { return cplx(f(x), 0.0); }, a, b, 1e-15, 1e-14)
      .value.real();
}

void check_dim(const Vec& v, int d, const char* what) {
  if (v.size() != d) throw ValidationError(std::string(what) + ": dimension mismatch");
  if (!v.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

double operator_norm(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

// ---------------------------------------------------------------- construction

Measure::Measure(MeasurePayload payload) : payload_(std::move(payload)) {
  std::visit(
      overloaded{
          [&](SurfaceMeasure& s) {
            std::visit(
                overloaded{
                    [&](Circle& c) {
                      dim_ = static_cast<int>(c.center.size());
                      if (dim_ < 2) throw ValidationError("circle: ambient dimension must be >= 2");
                      check_dim(c.center, dim_, "circle center");
                      check_dim(c.e1, dim_, "circle axis e1");
                      check_dim(c.e2, dim_, "circle axis e2");
                      if (!(c.radius > 0.0)) throw ValidationError("circle: radius must be positive");
                      if (std::abs(c.e1.norm() - 1.0) > 1e-10 || std::abs(c.e2.norm() - 1.0) > 1e-10 ||
                          std::abs(c.e1.dot(c.e2)) > 1e-10)
                        throw ValidationError("circle: axes must be orthonormal");
                      if (!(c.u0 < c.u1) || c.u1 - c.u0 > 1.0 + 1e-15)
                        throw ValidationError("circle: arc must satisfy u0 < u1 <= u0 + 1");
                    },
                    [&](Sphere& sp) {
                      dim_ = static_cast<int>(sp.center.size());
                      if (dim_ < 2) throw ValidationError("sphere: ambient dimension must be >= 2");
                      check_dim(sp.center, dim_, "sphere center");
                      if (!(sp.radius > 0.0)) throw ValidationError("sphere: radius must be positive");
                    },
                    [&](TorusOfRevolution& t) {
                      dim_ = 3;
                      if (!t.center.allFinite()) throw ValidationError("torus: non-finite center");
                      if (!(t.minor_radius > 0.0) || !(t.major_radius > t.minor_radius))
                        throw ValidationError("torus: need major_radius > minor_radius > 0");
                    },
                    [&](GraphCurve& g) {
                      dim_ = 2;
                      if (g.coefficients.empty()) throw ValidationError("graph: no coefficients");
                      for (double c : g.coefficients)
                        if (!std::isfinite(c)) throw ValidationError("graph: non-finite coefficient");
                      if (!(g.x0 < g.x1)) throw ValidationError("graph: need x0 < x1");
                    }},
                s.family);
            if (has_density(s.density)) {
              check_dim(s.density.gradient, dim_, "density gradient");
              // Positivity on the support: |g|·(distance from anchor) < 1.
              double reach = 0.0;
              std::visit(overloaded{[&](const Circle& c) { reach = c.radius; },
                                    [&](const Sphere& sp) { reach = sp.radius; },
                                    [&](const TorusOfRevolution& t) {
                                      reach = t.major_radius + t.minor_radius;
                                    },
                                    [&](const GraphCurve& g) {
                                      const Vec a = graph_anchor(g);
                                      for (int k = 0; k <= 256; ++k) {
                                        const double x = g.x0 + (g.x1 - g.x0) * k / 256.0;
                                        reach = std::max(reach, (graph_point(g, x) - a).norm());
                                      }
                                      reach *= 1.05;
                                    }},
                         s.family);
              if (!(s.density.gradient.norm() * reach < 1.0))
                throw ValidationError("density: weight 1 + g·(x - anchor) must stay positive");
            }
            // Mass of the weight relative to the parametrization measure.
            density_mass_ = std::visit(
                overloaded{
                    [&](const Circle& c) {
                      if (!has_density(s.density)) return 1.0;
                      return real_integral(
                                 [&](double u) { return weight(s.density, circle_point(c, u) - c.center); },
                                 c.u0, c.u1) /
                             (c.u1 - c.u0);
                    },
                    [&](const Sphere&) { return 1.0; },
                    [&](const TorusOfRevolution&) { return 1.0; },
                    [&](const GraphCurve& g) {
                      const Vec a = graph_anchor(g);
                      return real_integral(
                          [&](double x) {
                            return graph_speed(g, x) * weight(s.density, graph_point(g, x) - a);
                          },
                          g.x0, g.x1);
                    }},
                s.family);
          },
          [&](SegmentMeasure& s) {
            dim_ = static_cast<int>(s.v.size());
            if (dim_ < 1 || !s.v.allFinite() || s.v.norm() == 0.0)
              throw ValidationError("segment: v must be a finite nonzero vector");
          },
          [&](IfsMeasure& ifs) {
            if (ifs.maps.empty()) throw ValidationError("ifs: no maps");
            if (ifs.maps.size() != ifs.probabilities.size())
              throw ValidationError("ifs: one probability per map required");
            dim_ = static_cast<int>(ifs.maps.front().b.size());
            if (dim_ < 1) throw ValidationError("ifs: empty translation vector");
            for (const auto& m : ifs.maps) {
              if (m.A.rows() != dim_ || m.A.cols() != dim_ || m.b.size() != dim_)
                throw ValidationError("ifs: map dimension mismatch");
              if (!m.A.allFinite() || !m.b.allFinite()) throw ValidationError("ifs: non-finite map");
              if (!(operator_norm(m.A) < 1.0))
                throw ValidationError("ifs: every map must be a strict contraction (operator norm < 1)");
            }
            double total = 0.0;
            for (double p : ifs.probabilities) {
              if (!(p > 0.0)) throw ValidationError("ifs: probabilities must be positive");
              total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) throw ValidationError("ifs: probabilities must sum to 1");
            for (double& p : ifs.probabilities) p /= total;
          },
          [&](LiftedCircleMeasure&) { dim_ = 3; }},
      payload_);
}

Measure Measure::circle(const Vec& center, double radius) {
  const auto d = center.size();
  if (d < 2) throw ValidationError("circle: ambient dimension must be >= 2");
  Vec e1 = Vec::Zero(d), e2 = Vec::Zero(d);
  e1(0) = 1.0;
  e2(1) = 1.0;
  return circle(center, radius, e1, e2);
}

Measure Measure::circle(const Vec& center, double radius, const Vec& e1, const Vec& e2, double u0,
                        double u1, const Vec& density_gradient) {
  return Measure(SurfaceMeasure{Circle{center, radius, e1, e2, u0, u1}, {density_gradient}});
}

Measure Measure::sphere(const Vec& center, double radius, const Vec& density_gradient) {
  return Measure(SurfaceMeasure{Sphere{center, radius}, {density_gradient}});
}

Measure Measure::torus_of_revolution(const Eigen::Vector3d& center, double major_radius,
                                     double minor_radius, const Vec& density_gradient) {
  return Measure(
      SurfaceMeasure{TorusOfRevolution{center, major_radius, minor_radius}, {density_gradient}});
}

Measure Measure::graph(std::vector<double> coefficients, double x0, double x1,
                       const Vec& density_gradient) {
  return Measure(SurfaceMeasure{GraphCurve{std::move(coefficients), x0, x1}, {density_gradient}});
}

Measure Measure::segment(const Vec& v) { return Measure(SegmentMeasure{v}); }

Measure Measure::ifs(std::vector<AffineMap> maps, std::vector<double> probabilities) {
  return Measure(IfsMeasure{std::move(maps), std::move(probabilities)});
}

Measure Measure::lifted_circle() { return Measure(LiftedCircleMeasure{}); }

Measure Measure::ifs_preset(const std::string& name) {
  auto vec2 = [](double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
  };
  if (name == "sierpinski") {
    const Mat a = 0.5 * Mat::Identity(2, 2);
    return ifs({{a, vec2(0.0, 0.0)}, {a, vec2(0.5, 0.0)}, {a, vec2(0.25, std::sqrt(3.0) / 4.0)}},
               {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  }
  if (name == "rotation_rich") {
    auto rot = [](double r, double angle) {
      Mat m(2, 2);
      m << r * std::cos(angle), -r * std::sin(angle), r * std::sin(angle), r * std::cos(angle);
      return m;
    };
    Mat skew(2, 2);
    skew << 0.55, 0.1, -0.05, 0.35;
    return ifs({{rot(0.6, 1.0), vec2(0.0, 0.0)}, {rot(0.45, -2.3), vec2(1.0, 0.2)},
                {skew, vec2(0.3, 0.9)}},
               {0.4, 0.35, 0.25});
  }
  throw ValidationError("unknown ifs preset '" + name + "'");
}

std::string Measure::type_name() const {
  return std::visit(
      overloaded{[](const SurfaceMeasure& s) {
                   return std::visit(overloaded{[](const Circle&) { return std::string("circle"); },
                                                [](const Sphere&) { return std::string("sphere"); },
                                                [](const TorusOfRevolution&) {
                                                  return std::string("torus_of_revolution");
                                                },
                                                [](const GraphCurve&) { return std::string("graph"); }},
                                     s.family);
                 },
                 [](const SegmentMeasure&) { return std::string("segment"); },
                 [](const IfsMeasure&) { return std::string("ifs"); },
                 [](const LiftedCircleMeasure&) { return std::string("lifted_circle"); }},
      payload_);
}

double ifs_contraction(const IfsMeasure& ifs) {
  double rho = 0.0;
  for (const auto& m : ifs.maps) rho = std::max(rho, operator_norm(m.A));
  return rho;
}

double ifs_bounding_radius(const IfsMeasure& ifs) {
  double bmax = 0.0;
  for (const auto& m : ifs.maps) bmax = std::max(bmax, m.b.norm());
  return bmax / (1.0 - ifs_contraction(ifs));
}

double Measure::support_radius() const {
  return std::visit(
      overloaded{[](const SurfaceMeasure& s) {
                   return std::visit(
                       overloaded{[](const Circle& c) { return c.center.norm() + c.radius; },
                                  [](const Sphere& sp) { return sp.center.norm() + sp.radius; },
                                  [](const TorusOfRevolution& t) {
                                    return t.center.norm() + t.major_radius + t.minor_radius;
                                  },
                                  [](const GraphCurve& g) {
                                    double r = 0.0;
                                    for (int k = 0; k <= 1024; ++k)
                                      r = std::max(r, graph_point(g, g.x0 + (g.x1 - g.x0) * k / 1024.0).norm());
                                    return r * 1.01;
                                  }},
                       s.family);
                 },
                 [](const SegmentMeasure& s) { return s.v.norm(); },
                 [](const IfsMeasure& ifs) { return ifs_bounding_radius(ifs); },
                 [](const LiftedCircleMeasure&) { return std::sqrt(2.0); }},
      payload_);
}

// ---------------------------------------------------------------- Fourier transforms

namespace {

FourierValue circle_transform(const Circle& c, const AffineDensity& dens, double mass, const Vec& xi,
                              const Quadrature& q) {
  const double span = c.u1 - c.u0;
  const double p1 = xi.dot(c.e1), p2 = xi.dot(c.e2);
  const double rho = std::hypot(p1, p2);
  const double base = -kTwoPi * xi.dot(c.center);
  auto integrand = [&](double u) {
    const double cu = std::cos(kTwoPi * u), su = std::sin(kTwoPi * u);
    const double phase = base - kTwoPi * c.radius * (p1 * cu + p2 * su);
    double w = 1.0;
    if (has_density(dens)) w = 1.0 + c.radius * dens.gradient.dot(cu * c.e1 + su * c.e2);
    return expi(phase) * w;
  };
  QuadratureResult r;
  if (span >= 1.0) {
    const auto n0 = static_cast<std::size_t>(std::ceil(kTwoPi * c.radius * rho)) + 16;
    r = integrate_periodic(integrand, std::bit_ceil(n0), q.tolerance);
  } else {
    OscillatoryOptions opt;
    opt.order = q.order;
    opt.tolerance = q.tolerance * span;
    r = integrate_oscillatory([&](double u) { return integrand(c.u0 + span * u); }, 0.0, 1.0,
                              kTwoPi * kTwoPi * c.radius * rho * span, opt);
  }
  return {r.value / mass, r.error_estimate / mass};
}

FourierValue sphere_transform(const Sphere& sp, const AffineDensity& dens, const Vec& xi,
                              const Quadrature& q) {
  const double k = xi.norm();
  const cplx shift = expi(-kTwoPi * xi.dot(sp.center));
  if (k == 0.0) return {shift, 0.0};
  const int d = static_cast<int>(sp.center.size());
  const double g_par = has_density(dens) ? dens.gradient.dot(xi) / k : 0.0;
  const double norm_const =
      std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (d - 1)) / std::tgamma(0.5 * d);
  auto integrand = [&](double theta) {
    const double ct = std::cos(theta);
    const double w = 1.0 + sp.radius * g_par * ct;
    return expi(-kTwoPi * k * sp.radius * ct) * (w * std::pow(std::sin(theta), d - 2));
  };
  OscillatoryOptions opt;
  opt.order = q.order;
  opt.tolerance = q.tolerance;
  const auto r = integrate_oscillatory(integrand, 0.0, std::numbers::pi,
                                       2.0 * kTwoPi * k * sp.radius, opt);
  return {shift * r.value / norm_const, r.error_estimate / norm_const};
}

FourierValue torus_transform(const TorusOfRevolution& t, const AffineDensity& dens,
                             const Vec& xi, const Quadrature& q) {
  const double rho = std::hypot(xi(0), xi(1));
  const double psi = std::atan2(xi(1), xi(0));
  const Eigen::Vector3d g = has_density(dens) ? Eigen::Vector3d(dens.gradient) : Eigen::Vector3d::Zero();
  const double g_par = g(0) * std::cos(psi) + g(1) * std::sin(psi);
  const double big = t.major_radius, small = t.minor_radius;
  // The u-average is done in closed form with J0, J1; the v-integral is periodic.
  auto integrand = [&](double v) {
    const double cv = std::cos(kTwoPi * v), sv = std::sin(kTwoPi * v);
    const double s = big + small * cv;
    const double a = kTwoPi * s * rho;
    const double j0 = std::cyl_bessel_j(0.0, a);
    const double j1 = a == 0.0 ? 0.0 : std::cyl_bessel_j(1.0, a);
    const cplx inner = j0 * (1.0 + g(2) * small * sv) - cplx(0.0, 1.0) * (s * j1 * g_par);
    return expi(-kTwoPi * xi(2) * small * sv) * inner * (s / big);
  };
  const auto n0 = static_cast<std::size_t>(std::ceil(kTwoPi * small * (std::abs(xi(2)) + rho))) + 16;
  const auto r = integrate_periodic(integrand, std::bit_ceil(n0), q.tolerance);
  return {expi(-kTwoPi * xi.dot(Vec(t.center))) * r.value, r.error_estimate};
}

FourierValue graph_transform(const GraphCurve& gc, const AffineDensity& dens, double mass,
                             const Vec& xi, const Quadrature& q) {
  const Vec anchor = graph_anchor(gc);
  double length = 0.0;
  for (int k = 0; k < 256; ++k) {
    const double x = gc.x0 + (gc.x1 - gc.x0) * (k + 0.5) / 256.0;
    length = std::max(length, graph_speed(gc, x));
  }
  length *= (gc.x1 - gc.x0) * 1.1;
  auto integrand = [&](double x) {
    const Vec p = graph_point(gc, x);
    return expi(-kTwoPi * xi.dot(p)) * (graph_speed(gc, x) * weight(dens, p - anchor));
  };
  OscillatoryOptions opt;
  opt.order = q.order;
  opt.tolerance = q.tolerance * mass;
  const auto r = integrate_oscillatory(integrand, gc.x0, gc.x1, kTwoPi * xi.norm() * length, opt);
  return {r.value / mass, r.error_estimate / mass};
}

FourierValue segment_transform(const SegmentMeasure& s, const Vec& xi) {
  const double a = kTwoPi * xi.dot(s.v);
  if (a == 0.0) return {1.0, 0.0};
  if (std::abs(a) < 1e-4) {
    const cplx ia(0.0, a);
    return {1.0 - ia / 2.0 + ia * ia / 6.0 - ia * ia * ia / 24.0, 0.0};
  }
  return {(1.0 - expi(-a)) / cplx(0.0, a), 0.0};
}

FourierValue lifted_transform(const Vec& xi, const Quadrature& q) {
  const double rho = std::hypot(xi(0), xi(1));
  const double n3 = std::round(xi(2));
  const bool integral = std::abs(xi(2) - n3) == 0.0;
  if (rho == 0.0) {
    if (xi(2) == 0.0) return {1.0, 0.0};
    if (integral) return {0.0, 0.0};
    const double a = kTwoPi * xi(2);
    return {(1.0 - expi(-a)) / cplx(0.0, a), 0.0};
  }
  auto integrand = [&](double u) {
    return expi(-kTwoPi * (xi(0) * std::cos(kTwoPi * u) + xi(1) * std::sin(kTwoPi * u) + xi(2) * u));
  };
  QuadratureResult r;
  if (integral) {
    const auto n0 = static_cast<std::size_t>(std::ceil(kTwoPi * rho + std::abs(n3))) + 16;
    r = integrate_periodic(integrand, std::bit_ceil(n0), q.tolerance);
  } else {
    OscillatoryOptions opt;
    opt.order = q.order;
    opt.tolerance = q.tolerance;
    r = integrate_oscillatory(integrand, 0.0, 1.0, kTwoPi * (kTwoPi * rho + std::abs(xi(2))), opt);
  }
  return {r.value, r.error_estimate};
}

struct IfsMoments {
  Vec mean;
  Mat covariance;
};

IfsMoments ifs_moments(const IfsMeasure& ifs) {
  const auto d = ifs.maps.front().b.size();
  Mat lhs = Mat::Identity(d, d);
  Vec rhs = Vec::Zero(d);
  for (std::size_t j = 0; j < ifs.maps.size(); ++j) {
    lhs -= ifs.probabilities[j] * ifs.maps[j].A;
    rhs += ifs.probabilities[j] * ifs.maps[j].b;
  }
  const Vec m = lhs.partialPivLu().solve(rhs);
  // Second moment is the fixed point of M ↦ Σ p_j E[(A_j x + b_j)(A_j x + b_j)ᵀ].
  Mat second = m * m.transpose();
  for (int it = 0; it < 2000; ++it) {
    Mat next = Mat::Zero(d, d);
    for (std::size_t j = 0; j < ifs.maps.size(); ++j) {
      const auto& f = ifs.maps[j];
      const Vec am = f.A * m;
      next += ifs.probabilities[j] * (f.A * second * f.A.transpose() + am * f.b.transpose() +
                                      f.b * am.transpose() + f.b * f.b.transpose());
    }
    const double change = (next - second).norm();
    second = next;
    if (change < 1e-16 * (1.0 + second.norm())) break;
  }
  return {m, second - m * m.transpose()};
}

cplx ifs_leaf(const IfsMoments& mom, const Vec& eta) {
  const double quad = eta.dot(mom.covariance * eta);
  return expi(-kTwoPi * eta.dot(mom.mean)) * std::exp(-2.0 * std::numbers::pi * std::numbers::pi * quad);
}

cplx ifs_recurse(const IfsMeasure& ifs, const IfsMoments& mom, const Vec& eta, int depth) {
  if (depth == 0) return ifs_leaf(mom, eta);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < ifs.maps.size(); ++j) {
    const auto& f = ifs.maps[j];
    sum += ifs.probabilities[j] * expi(-kTwoPi * eta.dot(f.b)) *
           ifs_recurse(ifs, mom, f.A.transpose() * eta, depth - 1);
  }
  return sum;
}

FourierValue ifs_transform(const IfsMeasure& ifs, const Vec& xi, int depth) {
  const IfsMoments mom = ifs_moments(ifs);
  const cplx v = ifs_recurse(ifs, mom, xi, depth);
  // Leaf error is at most twice the Lipschitz bound 2π|η|R with |η| <= ρ^depth |ξ|.
  const double bound = 2.0 * kTwoPi * std::pow(ifs_contraction(ifs), depth) * xi.norm() *
                       (ifs_bounding_radius(ifs) + mom.mean.norm());
  return {v, bound};
}

FourierValue monte_carlo_transform(const Measure& m, const Vec& xi, const MonteCarlo& mc) {
  if (mc.n_samples < 1000) throw ValidationError("monte_carlo: n_samples must be >= 1000");
  const auto pts = sample(m, mc.n_samples, mc.seed);
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& p : pts) {
    const cplx e = expi(-kTwoPi * xi.dot(p));
    sum += e;
    sum_sq += std::norm(e);
  }
  const double n = static_cast<double>(pts.size());
  const cplx mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - std::norm(mean)) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

FourierValue fourier_transform(const Measure& m, const FourierQuery& q) {
  if (q.xi.size() != m.dim()) throw ValidationError("fourier_transform: ξ has wrong dimension");
  if (!q.xi.allFinite()) throw ValidationError("fourier_transform: non-finite ξ");
  FourierValue out;
  if (const auto* mc = std::get_if<MonteCarlo>(&q.method)) {
    out = monte_carlo_transform(m, q.xi, *mc);
  } else if (const auto* ip = std::get_if<IfsProduct>(&q.method)) {
    if (ip->depth < 8) throw ValidationError("ifs_product: depth must be >= 8");
    const auto* ifs = std::get_if<IfsMeasure>(&m.payload());
    if (!ifs) throw ValidationError("ifs_product: measure is not an IFS measure");
    out = ifs_transform(*ifs, q.xi, ip->depth);
  } else {
    const auto& quad = std::get<Quadrature>(q.method);
    if (quad.order < 8) throw ValidationError("quadrature: order must be >= 8");
    out = std::visit(
        overloaded{
            [&](const SurfaceMeasure& s) {
              return std::visit(
                  overloaded{
                      [&](const Circle& c) { return circle_transform(c, s.density, m.density_mass(), q.xi, quad); },
                      [&](const Sphere& sp) { return sphere_transform(sp, s.density, q.xi, quad); },
                      [&](const TorusOfRevolution& t) { return torus_transform(t, s.density, q.xi, quad); },
                      [&](const GraphCurve& g) { return graph_transform(g, s.density, m.density_mass(), q.xi, quad); }},
                  s.family);
            },
            [&](const SegmentMeasure& s) { return segment_transform(s, q.xi); },
            [&](const IfsMeasure&) -> FourierValue {
              throw ValidationError("quadrature: not available for IFS measures; use ifs_product or monte_carlo");
            },
            [&](const LiftedCircleMeasure&) { return lifted_transform(q.xi, quad); }},
        m.payload());
  }
  if (std::abs(out.value) > 1.0 + 1e-9 + out.error_estimate)
    throw NumericalError("fourier_transform: |μ̂(ξ)| exceeds 1; post-check failed");
  return out;
}

cplx fourier_transform(const Measure& m, const Vec& xi) {
  FourierQuery q{xi, Quadrature{}};
  if (std::holds_alternative<IfsMeasure>(m.payload())) q.method = IfsProduct{12};
  return fourier_transform(m, q).value;
}

// ---------------------------------------------------------------- sampling

std::vector<Vec> sample(const Measure& m, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("sample: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(n);

  auto accept = [&](double w, double wmax) { return unit(rng) * wmax <= w; };

  std::visit(
      overloaded{
          [&](const SurfaceMeasure& s) {
            const double gnorm = has_density(s.density) ? s.density.gradient.norm() : 0.0;
            std::visit(
                overloaded{
                    [&](const Circle& c) {
                      const double wmax = 1.0 + gnorm * c.radius;
                      while (out.size() < n) {
                        const double u = c.u0 + (c.u1 - c.u0) * unit(rng);
                        const Vec p = circle_point(c, u);
                        if (accept(weight(s.density, p - c.center), wmax)) out.push_back(p);
                      }
                    },
                    [&](const Sphere& sp) {
                      const double wmax = 1.0 + gnorm * sp.radius;
                      const auto d = sp.center.size();
                      while (out.size() < n) {
                        Vec g(d);
                        for (Eigen::Index k = 0; k < d; ++k) g(k) = gauss(rng);
                        const double len = g.norm();
                        if (len == 0.0) continue;
                        const Vec offset = (sp.radius / len) * g;
                        if (accept(weight(s.density, offset), wmax)) out.push_back(sp.center + offset);
                      }
                    },
                    [&](const TorusOfRevolution& t) {
                      const double reach = t.major_radius + t.minor_radius;
                      const double wmax = reach / t.major_radius * (1.0 + gnorm * reach);
                      while (out.size() < n) {
                        const double u = unit(rng), v = unit(rng);
                        const Eigen::Vector3d p = torus_point(t, u, v);
                        const double area = (t.major_radius + t.minor_radius * std::cos(kTwoPi * v)) / t.major_radius;
                        if (accept(area * weight(s.density, Vec(p - t.center)), wmax)) out.push_back(Vec(p));
                      }
                    },
                    [&](const GraphCurve& g) {
                      const Vec anchor = graph_anchor(g);
                      double wmax = 0.0;
                      for (int k = 0; k <= 4096; ++k) {
                        const double x = g.x0 + (g.x1 - g.x0) * k / 4096.0;
                        wmax = std::max(wmax, graph_speed(g, x) * weight(s.density, graph_point(g, x) - anchor));
                      }
                      wmax *= 1.02;
                      while (out.size() < n) {
                        const double x = g.x0 + (g.x1 - g.x0) * unit(rng);
                        const Vec p = graph_point(g, x);
                        if (accept(graph_speed(g, x) * weight(s.density, p - anchor), wmax)) out.push_back(p);
                      }
                    }},
                s.family);
          },
          [&](const SegmentMeasure& s) {
            while (out.size() < n) {
              const double u = unit(rng);
              if (u > 0.0) out.push_back(u * s.v);
            }
          },
          [&](const IfsMeasure& ifs) {
            std::discrete_distribution<std::size_t> pick(ifs.probabilities.begin(), ifs.probabilities.end());
            const auto d = ifs.maps.front().b.size();
            for (std::size_t i = 0; i < n; ++i) {
              Vec x = Vec::Zero(d);
              for (int step = 0; step < 64; ++step) {
                const auto& f = ifs.maps[pick(rng)];
                x = f.A * x + f.b;
              }
              out.push_back(std::move(x));
            }
          },
          [&](const LiftedCircleMeasure&) {
            for (std::size_t i = 0; i < n; ++i) {
              const double u = unit(rng);
              Vec p(3);
              p << std::cos(kTwoPi * u), std::sin(kTwoPi * u), u;
              out.push_back(std::move(p));
            }
          }},
      m.payload());
  return out;
}

// ---------------------------------------------------------------- decay fits

AsymptoticFit decay_exponent_fit(const Measure& m, const Vec& direction,
                                 const std::vector<double>& t_grid, const DecayFitOptions& opt) {
  if (t_grid.size() < 8) throw ValidationError("decay_exponent_fit: t_grid needs >= 8 points");
  const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0 * (1.0 - 1e-12))
    throw ValidationError("decay_exponent_fit: t_grid must be positive and span >= 2 decades");
  if (direction.size() != m.dim() || direction.norm() == 0.0)
    throw ValidationError("decay_exponent_fit: direction must be a nonzero vector of the right dimension");
  const Vec dir = direction.normalized();
  const auto mags = parallel_map(t_grid.size(), opt.jobs, [&](std::size_t i) {
    return std::abs(fourier_transform(m, Vec(t_grid[i] * dir)));
  });
  return fit_decay(t_grid, mags, FitAxis::LogLog, opt.mode, opt.window);
}

}  // namespace equilab::measures
