#include "equilab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "equilab/error.hpp"

namespace equilab {

namespace {

GaussLegendreRule build_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

// Kronrod 15-point extension of the 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const ComplexIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx f1 = f(c - dx);
    const cplx f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw ValidationError("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

cplx composite_gauss_legendre(const ComplexIntegrand& f, double a, double b, std::size_t panels,
                              int order) {
  const auto& rule = gauss_legendre(order);
  const double h = (b - a) / static_cast<double>(panels);
  cplx sum = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    cplx panel = 0.0;
    for (int k = 0; k < order; ++k) panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    sum += panel;
  }
  return sum * (0.5 * h);
}

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b, double abs_tol,
                                    double rel_tol, std::size_t max_intervals) {
  QuadratureResult out;
  if (a == b) return out;
  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  cplx total = first.value;
  double err = first.error;
  heap.push(first);
  out.evaluations = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= max_intervals)
      throw NumericalError("integrate_adaptive: interval budget exhausted");
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation from the incremental updates.
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error_estimate = err;
  return out;
}

QuadratureResult integrate_oscillatory(const ComplexIntegrand& f, double a, double b,
                                       double phase_variation, const OscillatoryOptions& opt) {
  // Roughly one panel per radian of phase for a 20-point rule, never fewer than 2.
  std::size_t panels = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(std::abs(phase_variation) / 4.0)));
  if (panels > opt.max_panels)
    throw UnsupportedFrequency("integrate_oscillatory: phase variation exceeds panel cap");
  QuadratureResult out;
  cplx previous = composite_gauss_legendre(f, a, b, panels, opt.order);
  out.evaluations = panels * static_cast<std::size_t>(opt.order);
  for (;;) {
    const std::size_t next = 2 * panels;
    if (next > opt.max_panels)
      throw UnsupportedFrequency("integrate_oscillatory: panel cap exceeded before convergence");
    const cplx current = composite_gauss_legendre(f, a, b, next, opt.order);
    out.evaluations += next * static_cast<std::size_t>(opt.order);
    const double diff = std::abs(current - previous);
    panels = next;
    if (diff <= opt.tolerance) {
      out.value = current;
      out.error_estimate = diff;
      return out;
    }
    previous = current;
  }
}

QuadratureResult integrate_periodic(const ComplexIntegrand& f, std::size_t initial_nodes,
                                    double tolerance, std::size_t max_nodes) {
  std::size_t n = std::max<std::size_t>(initial_nodes, 8);
  if (n > max_nodes) throw UnsupportedFrequency("integrate_periodic: node cap exceeded");
  cplx sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += f(static_cast<double>(k) / static_cast<double>(n));
  cplx previous = sum / static_cast<double>(n);
  QuadratureResult out;
  out.evaluations = n;
  for (;;) {
    if (2 * n > max_nodes) throw UnsupportedFrequency("integrate_periodic: node cap exceeded");
    // Doubling reuses the previous nodes; only the midpoints are new.
    cplx mids = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      mids += f((static_cast<double>(k) + 0.5) / static_cast<double>(n));
    out.evaluations += n;
    sum += mids;
    n *= 2;
    const cplx current = sum / static_cast<double>(n);
    const double diff = std::abs(current - previous);
    if (diff <= tolerance) {
      out.value = current;
      out.error_estimate = diff;
      return out;
    }
    previous = current;
  }
}

}  // namespace equilab
