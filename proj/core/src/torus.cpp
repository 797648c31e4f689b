#include "equilab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "equilab/error.hpp"
#include "equilab/parallel.hpp"

namespace equilab::torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx expi(double p) { return {std::cos(p), std::sin(p)}; }

struct IVecLess {
  bool operator()(const IVec& a, const IVec& b) const {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  }
};

}  // namespace

// ---------------------------------------------------------------- lattice

TorusLattice::TorusLattice(const Mat& basis) : basis_(basis) {
  if (basis.rows() < 1 || basis.rows() != basis.cols())
    throw ValidationError("TorusLattice: basis must be a nonempty square matrix");
  if (!basis.allFinite()) throw ValidationError("TorusLattice: non-finite basis");
  Eigen::FullPivLU<Mat> lu(basis);
  if (!lu.isInvertible()) throw ValidationError("TorusLattice: basis is singular");
  inverse_ = lu.inverse();
  const auto d = basis.rows();
  if ((basis_ * inverse_ - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("TorusLattice: basis too ill-conditioned to invert to 1e-12");
  dual_ = inverse_.transpose();
}

TorusLattice TorusLattice::standard(int d) { return TorusLattice(Mat::Identity(d, d)); }

Vec TorusLattice::fractional(const Vec& x) const {
  Vec c = inverse_ * x;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    c(i) -= std::floor(c(i));
    if (c(i) >= 1.0) c(i) = 0.0;
  }
  return c;
}

// ---------------------------------------------------------------- dilations

RotationPath RotationPath::constant(const Mat& q) {
  if (q.rows() != q.cols()) throw ValidationError("RotationPath: matrix must be square");
  if ((q.transpose() * q - Mat::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("RotationPath: matrix must be orthogonal to 1e-12");
  RotationPath r;
  r.kind_ = Kind::Constant;
  r.q_ = q;
  return r;
}

RotationPath RotationPath::planar(int i, int j, double omega, double phase) {
  if (i < 0 || j < 0 || i == j) throw ValidationError("RotationPath: need two distinct axes");
  if (!std::isfinite(omega) || !std::isfinite(phase)) throw ValidationError("RotationPath: non-finite angle");
  RotationPath r;
  r.kind_ = Kind::Planar;
  r.i_ = i;
  r.j_ = j;
  r.omega_ = omega;
  r.phase_ = phase;
  return r;
}

Mat RotationPath::at(double t, int d) const {
  switch (kind_) {
    case Kind::Identity:
      return Mat::Identity(d, d);
    case Kind::Constant:
      if (q_.rows() != d) throw ValidationError("RotationPath: dimension mismatch");
      return q_;
    case Kind::Planar: {
      if (i_ >= d || j_ >= d) throw ValidationError("RotationPath: axis out of range");
      Mat a = Mat::Identity(d, d);
      const double ang = omega_ * t + phase_;
      a(i_, i_) = std::cos(ang);
      a(i_, j_) = -std::sin(ang);
      a(j_, i_) = std::sin(ang);
      a(j_, j_) = std::cos(ang);
      return a;
    }
  }
  return Mat::Identity(d, d);
}

std::string RotationPath::kind() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Constant: return "constant";
    case Kind::Planar: return "planar";
  }
  return "identity";
}

DilationFamily::DilationFamily(Vec center, RotationPath rotation, Vec offset0, Vec offset_rate)
    : center_(std::move(center)), rotation_(std::move(rotation)), b0_(std::move(offset0)), b1_(std::move(offset_rate)) {
  const auto d = center_.size();
  if (d < 1 || !center_.allFinite()) throw ValidationError("DilationFamily: invalid center");
  if (b0_.size() == 0) b0_ = Vec::Zero(d);
  if (b1_.size() == 0) b1_ = Vec::Zero(d);
  if (b0_.size() != d || b1_.size() != d || !b0_.allFinite() || !b1_.allFinite())
    throw ValidationError("DilationFamily: offset dimension mismatch");
  (void)rotation_.at(0.0, static_cast<int>(d));
}

Vec DilationFamily::offset(double t) const { return b0_ + t * b1_; }

Vec DilationFamily::apply(const Vec& x, double t) const {
  return center_ + t * (rotation(t) * (x - center_)) + offset(t);
}

// ---------------------------------------------------------------- observables

TorusObservable::TorusObservable(std::vector<FourierTerm> terms, bool real_valued) : real_(real_valued) {
  if (terms.empty()) throw ValidationError("TorusObservable: at least one term required");
  dim_ = static_cast<int>(terms.front().k.size());
  std::map<IVec, cplx, IVecLess> merged;
  for (const auto& term : terms) {
    if (term.k.size() != dim_ || dim_ < 1) throw ValidationError("TorusObservable: frequency dimension mismatch");
    if (!std::isfinite(term.coefficient.real()) || !std::isfinite(term.coefficient.imag()))
      throw ValidationError("TorusObservable: non-finite coefficient");
    merged[term.k] += term.coefficient;
  }
  for (const auto& [k, c] : merged)
    if (c != 0.0) terms_.push_back({k, c});
  if (terms_.empty()) terms_.push_back({IVec::Zero(dim_), 0.0});
  if (real_) {
    for (const auto& term : terms_) {
      const IVec neg = -term.k;
      const auto it = merged.find(neg);
      const cplx partner = it == merged.end() ? 0.0 : it->second;
      if (std::abs(partner - std::conj(term.coefficient)) > 1e-12 * (1.0 + std::abs(term.coefficient)))
        throw ValidationError("TorusObservable: real-valued flag requires conjugate-symmetric coefficients");
    }
  }
}

TorusObservable TorusObservable::character(const IVec& k, cplx coefficient) {
  return TorusObservable({{k, coefficient}});
}

TorusObservable TorusObservable::cosine(const IVec& k, double amplitude, double phase) {
  const cplx c = 0.5 * amplitude * expi(phase);
  return TorusObservable({{k, c}, {IVec(-k), std::conj(c)}}, true);
}

TorusObservable TorusObservable::operator+(const TorusObservable& other) const {
  std::vector<FourierTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return TorusObservable(std::move(all), real_ && other.real_);
}

cplx TorusObservable::constant_term() const {
  for (const auto& term : terms_)
    if (term.k.isZero()) return term.coefficient;
  return 0.0;
}

double TorusObservable::l1_norm() const {
  double s = 0.0;
  for (const auto& term : terms_)
    if (!term.k.isZero()) s += std::abs(term.coefficient);
  return s;
}

cplx TorusObservable::evaluate(const TorusLattice& lattice, const Vec& x) const {
  // η_k·x = k·(B^{-1}x), so only the fractional lattice coordinates matter.
  const Vec c = lattice.fractional(x);
  cplx s = 0.0;
  for (const auto& term : terms_) s += term.coefficient * expi(kTwoPi * term.k.cast<double>().dot(c));
  return s;
}

// ---------------------------------------------------------------- discrepancy

cplx discrepancy_series(const Measure& m, const TorusLattice& lat, const DilationFamily& dil,
                        const TorusObservable& f, double t,
                        const std::optional<measures::FourierMethod>& method) {
  if (!(t > 0.0)) throw ValidationError("discrepancy_series: t must be positive");
  if (m.dim() != lat.dim() || dil.dim() != lat.dim() || f.dim() != lat.dim())
    throw ValidationError("discrepancy_series: dimension mismatch between measure, lattice, dilation and observable");
  const Mat a = dil.rotation(t);
  const Vec shift = dil.center() - t * (a * dil.center()) + dil.offset(t);
  cplx sum = 0.0;
  for (const auto& term : f.terms()) {
    if (term.k.isZero()) continue;
    const Vec eta = lat.dual_vector(term.k);
    const Vec xi = -t * (a.transpose() * eta);
    const cplx mu = method ? measures::fourier_transform(m, measures::FourierQuery{xi, *method}).value
                           : measures::fourier_transform(m, xi);
    sum += term.coefficient * expi(kTwoPi * eta.dot(shift)) * mu;
  }
  return sum;
}

MonteCarloEstimate discrepancy_monte_carlo(const Measure& m, const TorusLattice& lat,
                                           const DilationFamily& dil, const TorusObservable& f,
                                           double t, std::size_t n, std::uint64_t seed) {
  if (n < 1000) throw ValidationError("discrepancy_monte_carlo: n must be >= 1000");
  if (!(t > 0.0)) throw ValidationError("discrepancy_monte_carlo: t must be positive");
  if (m.dim() != lat.dim() || dil.dim() != lat.dim() || f.dim() != lat.dim())
    throw ValidationError("discrepancy_monte_carlo: dimension mismatch");
  const cplx f0 = f.constant_term();
  if (f.l1_norm() == 0.0) return {0.0, 0.0, n};
  const auto pts = measures::sample(m, n, seed);
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& x : pts) {
    const cplx v = f.evaluate(lat, dil.apply(x, t)) - f0;
    sum += v;
    sum_sq += std::norm(v);
  }
  const double nn = static_cast<double>(n);
  const cplx mean = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - std::norm(mean)) * nn / (nn - 1.0);
  return {mean, std::sqrt(var / nn), n};
}

// ---------------------------------------------------------------- ray test

std::string to_string(RayVerdict v) {
  switch (v) {
    case RayVerdict::Decays: return "decays";
    case RayVerdict::Stalls: return "stalls";
    case RayVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void validate_grid(const std::vector<double>& t_grid, double min_decades, const char* who) {
  if (t_grid.size() < 2) throw ValidationError(std::string(who) + ": t_grid needs >= 2 points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]))
      throw ValidationError(std::string(who) + ": t_grid entries must be positive and finite");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw ValidationError(std::string(who) + ": t_grid must be increasing");
  }
  if (std::log10(t_grid.back() / t_grid.front()) < min_decades - 1e-9)
    throw ValidationError(std::string(who) + ": t_grid must span >= " + std::to_string(min_decades) + " decades");
}

std::vector<RayResult> integral_ray_decay_test(const Measure& m, const TorusLattice& lat,
                                               const std::vector<IVec>& rays,
                                               const std::vector<double>& t_grid,
                                               const RayTestOptions& opt) {
  validate_grid(t_grid, 2.0, "integral_ray_decay_test");
  if (m.dim() != lat.dim()) throw ValidationError("integral_ray_decay_test: dimension mismatch");
  std::vector<RayResult> out;
  for (const auto& ray : rays) {
    if (ray.size() != lat.dim() || ray.isZero())
      throw ValidationError("integral_ray_decay_test: rays must be nonzero vectors of the lattice dimension");
    RayResult r;
    r.ray = ray;
    const Vec eta = lat.dual_vector(ray);
    r.magnitudes = parallel_map(t_grid.size(), opt.jobs, [&](std::size_t i) {
      return std::abs(measures::fourier_transform(m, Vec(t_grid[i] * eta)));
    });
    const auto wmin = windowed_min(r.magnitudes, opt.window);
    const auto wmax = windowed_max(r.magnitudes, opt.window);
    const double first_end = 10.0 * t_grid.front(), last_start = t_grid.back() / 10.0;
    r.first_decade_max = 0.0;
    r.last_decade_min = INFINITY;
    r.last_decade_max = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (t_grid[i] <= first_end) r.first_decade_max = std::max(r.first_decade_max, r.magnitudes[i]);
      if (t_grid[i] >= last_start) {
        r.last_decade_min = std::min(r.last_decade_min, wmin[i]);
        r.last_decade_max = std::max(r.last_decade_max, wmax[i]);
      }
    }
    if (r.last_decade_min > opt.stall_threshold)
      r.verdict = RayVerdict::Stalls;
    else if (r.last_decade_max < opt.decay_ratio * r.first_decade_max)
      r.verdict = RayVerdict::Decays;
    else
      r.verdict = RayVerdict::Inconclusive;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- rate fits

RateFit summarize_rate(std::vector<double> t, std::vector<cplx> disc, double l1_norm,
                       const RateFitOptions& opt) {
  RateFit out;
  std::vector<double> mags;
  for (const auto& d : disc) mags.push_back(std::abs(d));
  out.fit = fit_decay(t, mags, FitAxis::LogLog, opt.mode, opt.window);
  out.l1_norm = l1_norm;
  out.decay_rate = opt.decay_rate.value_or(-out.fit.slope);
  for (std::size_t i = 0; i < t.size(); ++i)
    out.constant = std::max(out.constant, mags[i] * std::pow(t[i], out.decay_rate) / l1_norm);
  out.t = std::move(t);
  out.discrepancy = std::move(disc);
  return out;
}

RateFit equidistribution_rate_fit(const Measure& m, const TorusLattice& lat,
                                  const DilationFamily& dil, const TorusObservable& f,
                                  const std::vector<double>& t_grid, const RateFitOptions& opt) {
  validate_grid(t_grid, 2.0, "equidistribution_rate_fit");
  if (f.l1_norm() == 0.0) throw ValidationError("equidistribution_rate_fit: observable is constant");
  auto disc = parallel_map(t_grid.size(), opt.jobs,
                           [&](std::size_t i) { return discrepancy_series(m, lat, dil, f, t_grid[i]); });
  return summarize_rate(t_grid, std::move(disc), f.l1_norm(), opt);
}

}  // namespace equilab::torus
