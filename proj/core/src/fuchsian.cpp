#include "equilab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "equilab/error.hpp"
#include "equilab/grid.hpp"
#include "equilab/json_io.hpp"
#include "equilab/quadrature.hpp"

namespace equilab::fuchsian {

namespace {

constexpr double kPi = std::numbers::pi;

double frob2(const Mat2& m) { return m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d; }

Sl2Element lift_of(const UpperHalfPoint& z) { return from_iwasawa(z.x(), z.y(), 0.0); }

std::complex<double> to_disk(const UpperHalfPoint& w) {
  const std::complex<double> z = w.z(), i(0.0, 1.0);
  return (z - i) / (z + i);
}

}  // namespace

FuchsianGroup::FuchsianGroup(std::vector<Sl2Element> generators, std::vector<int> relator, UpperHalfPoint center,
                             std::string name)
    : name_(std::move(name)), generators_(std::move(generators)), relator_(std::move(relator)), center_(center) {
  if (generators_.empty()) throw ValidationError("FuchsianGroup: no generators");
  for (std::size_t k = 0; k < generators_.size(); ++k) {
    const auto& g = generators_[k];
    if (std::abs(g.det() - 1.0) > 1e-12)
      throw ValidationError("FuchsianGroup: generator " + std::to_string(k + 1) + " does not have det 1");
    if (!(std::abs(g.trace()) > 2.0))
      throw ValidationError("FuchsianGroup: generator " + std::to_string(k + 1) + " is not hyperbolic");
  }
  const int n = static_cast<int>(generators_.size());
  for (int k = 0; k < n; ++k) {
    pairings_.push_back(generators_[k]);
    labels_.push_back(k + 1);
  }
  for (int k = 0; k < n; ++k) {
    pairings_.push_back(generators_[k].inverse());
    labels_.push_back(-(k + 1));
  }
  if (!relator_.empty()) {
    for (int r : relator_)
      if (r == 0 || std::abs(r) > n) throw ValidationError("FuchsianGroup: relator index out of range");
    const Mat2 m = word_element(relator_).matrix();
    const double plus = std::max({std::abs(m.a - 1), std::abs(m.b), std::abs(m.c), std::abs(m.d - 1)});
    const double minus = std::max({std::abs(m.a + 1), std::abs(m.b), std::abs(m.c), std::abs(m.d + 1)});
    if (std::min(plus, minus) > 1e-9) throw ValidationError("FuchsianGroup: relator does not evaluate to ±identity");
  }
  center_lift_inv_ = lift_of(center_).inverse();

  // Bisectors between the center and its images: tanh(D/2) and direction in the disk.
  inradius_ = INFINITY;
  for (const auto& g : pairings_) {
    const UpperHalfPoint img = moebius(g, center_);
    const double dk = hyperbolic_distance(img, center_);
    const Polar p = polar(img);
    bisector_tanh_.push_back(std::tanh(0.5 * dk));
    bisector_dir_.push_back(p.phi);
    inradius_ = std::min(inradius_, 0.5 * dk);
  }
  if (!std::isfinite(boundary_radius(0.0)) || !std::isfinite(boundary_radius(kPi)) ||
      !std::isfinite(boundary_radius(0.5 * kPi)) || !std::isfinite(boundary_radius(-0.5 * kPi)))
    throw ValidationError("FuchsianGroup: side pairings do not bound a compact Dirichlet domain");

  // Vertices are pairwise bisector intersections lying on the boundary.
  circumradius_ = 0.0;
  const std::size_t m = bisector_tanh_.size();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = k + 1; l < m; ++l) {
      const double tk = bisector_tanh_[k], tl = bisector_tanh_[l];
      const double ca = tk * std::cos(bisector_dir_[l]) - tl * std::cos(bisector_dir_[k]);
      const double cb = tk * std::sin(bisector_dir_[l]) - tl * std::sin(bisector_dir_[k]);
      for (double phi : {std::atan2(ca, -cb), std::atan2(-ca, cb)}) {
        const double cosk = std::cos(phi - bisector_dir_[k]);
        if (!(cosk > tk)) continue;
        const double rho = std::atanh(tk / cosk);
        if (std::abs(boundary_radius(phi) - rho) < 1e-9) circumradius_ = std::max(circumradius_, rho);
      }
    }
  }
  if (!(circumradius_ > 0.0)) throw NumericalError("FuchsianGroup: failed to locate Dirichlet vertices");

  const ComplexIntegrand cell = [this](double phi) { return std::complex<double>(std::cosh(boundary_radius(phi)) - 1.0); };
  area_ = 0.0;
  const auto pieces = linspace(-kPi, kPi, 4 * m + 1);
  for (std::size_t j = 0; j + 1 < pieces.size(); ++j)
    area_ += integrate_adaptive(cell, pieces[j], pieces[j + 1], 1e-13, 1e-13).value.real();
}

FuchsianGroup FuchsianGroup::bolza() {
  const double a = 1.0 + std::numbers::sqrt2;
  const double b = std::sqrt(2.0 + 2.0 * std::numbers::sqrt2);
  const Sl2Element base = Sl2Element::from_entries(a, -b, -b, a);
  std::vector<Sl2Element> gens;
  for (int k = 0; k < 4; ++k) {
    const Sl2Element r = exp_lie(lie::Theta, -(2 - k) * kPi / 8.0);
    gens.push_back(r * base * r.inverse());
  }
  return FuchsianGroup(std::move(gens), {1, -2, 3, -4, -1, 2, -3, 4}, UpperHalfPoint(0.0, 1.0), "bolza");
}

FuchsianGroup FuchsianGroup::from_json(const nlohmann::json& j) {
  json_io::require_keys(j, {"name", "description", "center", "generators", "relator"}, "group");
  if (!j.contains("generators") || !j.at("generators").is_array())
    throw ValidationError("group.generators: expected an array of 2x2 matrices");
  std::vector<Sl2Element> gens;
  for (std::size_t k = 0; k < j.at("generators").size(); ++k) {
    const auto v = json_io::read_reals(j.at("generators")[k], "group.generators[" + std::to_string(k) + "]");
    if (v.size() != 4) throw ValidationError("group.generators: each matrix needs 4 row-major entries");
    gens.push_back(Sl2Element::from_entries(v[0], v[1], v[2], v[3], 1e-12));
  }
  std::vector<int> relator;
  if (j.contains("relator")) {
    if (!j.at("relator").is_array()) throw ValidationError("group.relator: expected an integer array");
    for (const auto& r : j.at("relator")) {
      if (!r.is_number_integer()) throw ValidationError("group.relator: expected integers");
      relator.push_back(r.get<int>());
    }
  }
  UpperHalfPoint center(0.0, 1.0);
  if (j.contains("center")) {
    const auto c = json_io::read_reals(j.at("center"), "group.center");
    if (c.size() != 2) throw ValidationError("group.center: expected [x, y]");
    center = UpperHalfPoint(c[0], c[1]);
  }
  std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  return FuchsianGroup(std::move(gens), std::move(relator), center, std::move(name));
}

FuchsianGroup FuchsianGroup::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("group file not readable: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("group file " + path + ": " + e.what());
  }
  return from_json(j);
}

Sl2Element FuchsianGroup::word_element(const std::vector<int>& word) const {
  Sl2Element g;
  const int n = static_cast<int>(generators_.size());
  for (int r : word) {
    if (r == 0 || std::abs(r) > n) throw ValidationError("word index out of range");
    g = g * (r > 0 ? generators_[r - 1] : generators_[-r - 1].inverse());
  }
  return g;
}

double FuchsianGroup::cosh_distance(const Mat2& g) const {
  return std::max(1.0, 0.5 * frob2(center_lift_inv_.matrix() * g));
}

double FuchsianGroup::distance(const Sl2Element& g) const { return std::acosh(cosh_distance(g.matrix())); }

ReducedPoint FuchsianGroup::reduce(const Sl2Element& g) const {
  ReducedPoint out{g, Sl2Element(), {}};
  double cur = cosh_distance(g.matrix());
  for (std::size_t step = 0;; ++step) {
    if (step >= kMaxReductionSteps)
      throw NonTermination("reduce: no convergence after 1e5 steps (generator set inconsistent?)");
    std::size_t best = pairings_.size();
    double best_val = cur;
    for (std::size_t k = 0; k < pairings_.size(); ++k) {
      const double v = cosh_distance(pairings_[k].matrix() * out.g.matrix());
      if (v < best_val) {
        best_val = v;
        best = k;
      }
    }
    // Accept only strict decrease of the distance by more than 1e-12.
    if (best == pairings_.size() || std::acosh(cur) - std::acosh(best_val) <= 1e-12) break;
    out.g = pairings_[best] * out.g;
    out.gamma = pairings_[best] * out.gamma;
    out.word.push_back(labels_[best]);
    cur = best_val;
  }
  return out;
}

Sl2Element FuchsianGroup::reduce_fast(const Sl2Element& g) const {
  Sl2Element h = g;
  double cur = cosh_distance(h.matrix());
  for (std::size_t step = 0;; ++step) {
    if (step >= kMaxReductionSteps) throw NonTermination("reduce: no convergence after 1e5 steps");
    std::size_t best = pairings_.size();
    double best_val = cur;
    for (std::size_t k = 0; k < pairings_.size(); ++k) {
      const double v = cosh_distance(pairings_[k].matrix() * h.matrix());
      if (v < best_val) {
        best_val = v;
        best = k;
      }
    }
    if (best == pairings_.size() || std::acosh(cur) - std::acosh(best_val) <= 1e-12) return h;
    h = pairings_[best] * h;
    cur = best_val;
  }
}

std::vector<Sl2Element> FuchsianGroup::shell(double radius) const {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw ValidationError("shell: radius must be finite and >= 0");
  // Tiles met by the geodesic from the center to γ·center have centers within circumradius of it,
  // and consecutive tiles differ by right multiplication with a side pairing.
  const double explore = radius + circumradius_ + 1e-9;
  std::vector<Sl2Element> found{Sl2Element()};
  std::vector<std::complex<double>> keys{to_disk(center_)};
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> buckets;
  auto bucket_of = [](std::complex<double> z) {
    return std::make_pair(std::llround(z.real() * 1e6), std::llround(z.imag() * 1e6));
  };
  buckets[bucket_of(keys[0])].push_back(0);
  auto known = [&](std::complex<double> z) {
    const auto [bx, by] = bucket_of(z);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find({bx + dx, by + dy});
        if (it == buckets.end()) continue;
        for (std::size_t idx : it->second)
          if (std::abs(keys[idx] - z) < 1e-9) return true;
      }
    return false;
  };
  for (std::size_t head = 0; head < found.size(); ++head) {
    if (found.size() > 5000000) throw NonTermination("shell: enumeration exceeded 5e6 elements");
    for (const auto& s : pairings_) {
      const Sl2Element g = found[head] * s;
      if (distance(g) > explore) continue;
      const auto z = to_disk(moebius(g, center_));
      if (known(z)) continue;
      buckets[bucket_of(z)].push_back(keys.size());
      keys.push_back(z);
      found.push_back(g);
    }
  }
  std::vector<Sl2Element> out;
  for (const auto& g : found)
    if (distance(g) <= radius) out.push_back(g);
  return out;
}

Polar FuchsianGroup::polar(const UpperHalfPoint& z) const {
  const auto zeta = to_disk(moebius(center_lift_inv_, z));
  return {2.0 * std::atanh(std::min(std::abs(zeta), 1.0 - 1e-16)), std::arg(zeta)};
}

double FuchsianGroup::boundary_radius(double phi) const {
  double rho = INFINITY;
  for (std::size_t k = 0; k < bisector_tanh_.size(); ++k) {
    const double c = std::cos(phi - bisector_dir_[k]);
    if (c > bisector_tanh_[k]) rho = std::min(rho, std::atanh(bisector_tanh_[k] / c));
  }
  return rho;
}

Sl2Element flow_reduce(const FuchsianGroup& grp, Sl2Element g, double t, double max_step) {
  if (!(max_step > 0.0)) throw ValidationError("flow_reduce: max_step must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / max_step)));
  const Sl2Element step = exp_lie(lie::X, t / steps);
  g = grp.reduce_fast(g);
  for (int i = 0; i < steps; ++i) g = grp.reduce_fast(g * step);
  return g;
}

std::vector<ReducedPoint> geodesic_circle_points(const FuchsianGroup& grp, const Sl2Element& q, double t,
                                                 const std::vector<double>& s_grid) {
  if (!(t >= 0.0)) throw ValidationError("geodesic_circle_points: t must be >= 0");
  std::vector<ReducedPoint> out;
  out.reserve(s_grid.size());
  const int steps = std::max(1, static_cast<int>(std::ceil(t)));
  const Sl2Element step = exp_lie(lie::X, t / steps);
  for (double s : s_grid) {
    ReducedPoint r = grp.reduce(q * exp_lie(lie::Theta, s));
    for (int i = 0; i < steps; ++i) {
      ReducedPoint next = grp.reduce(r.g * step);
      r.g = next.g;
      r.gamma = next.gamma * r.gamma;
      r.word.insert(r.word.end(), next.word.begin(), next.word.end());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Sl2Element> sample_haar(const FuchsianGroup& grp, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rc = grp.circumradius();
  const Sl2Element lift = from_iwasawa(grp.center().x(), grp.center().y(), 0.0);
  std::vector<Sl2Element> out;
  out.reserve(n);
  while (out.size() < n) {
    // Uniform in the hyperbolic disk of radius rc, then keep points inside the domain.
    const double rho = std::acosh(1.0 + unit(rng) * (std::cosh(rc) - 1.0));
    const double phi = 2.0 * kPi * unit(rng) - kPi;
    if (rho > grp.boundary_radius(phi)) continue;
    const std::complex<double> zeta = std::tanh(0.5 * rho) * std::polar(1.0, phi);
    const std::complex<double> i(0.0, 1.0);
    const auto w = moebius(lift, UpperHalfPoint::from_complex(i * (1.0 + zeta) / (1.0 - zeta)));
    out.push_back(from_iwasawa(w.x(), w.y(), kPi * unit(rng)));
  }
  return out;
}

CellPartition::CellPartition(std::shared_ptr<const FuchsianGroup> grp, int sectors, int radial, int fiber)
    : grp_(std::move(grp)), sectors_(sectors), radial_(radial), fiber_(fiber) {
  if (!grp_) throw ValidationError("CellPartition: group required");
  if (sectors < 1 || radial < 1 || fiber < 1) throw ValidationError("CellPartition: bin counts must be positive");
  masses_.assign(cell_count(), 0.0);
  const double width = 2.0 * kPi / sectors_;
  const ComplexIntegrand area = [this](double phi) {
    return std::complex<double>(std::cosh(grp_->boundary_radius(phi)) - 1.0);
  };
  double total = 0.0;
  std::vector<double> sector_mass(sectors_);
  for (int k = 0; k < sectors_; ++k) {
    const double lo = -kPi + k * width;
    for (int j = 0; j < 8; ++j)
      sector_mass[k] += integrate_adaptive(area, lo + j * width / 8, lo + (j + 1) * width / 8, 1e-14, 1e-13).value.real();
    total += sector_mass[k];
  }
  // Radial bins split cosh ρ - 1 evenly along each ray, so they share the sector mass equally.
  for (int k = 0; k < sectors_; ++k)
    for (int r = 0; r < radial_; ++r)
      for (int f = 0; f < fiber_; ++f)
        masses_[(k * radial_ + r) * fiber_ + f] = sector_mass[k] / total / (radial_ * fiber_);
}

int CellPartition::cell(const Sl2Element& reduced) const {
  const Polar p = grp_->polar(base_point(reduced));
  int k = static_cast<int>(std::floor((p.phi + kPi) / (2.0 * kPi) * sectors_));
  k = std::clamp(k, 0, sectors_ - 1);
  const double bound = std::cosh(grp_->boundary_radius(p.phi)) - 1.0;
  int r = static_cast<int>(std::floor((std::cosh(p.rho) - 1.0) / bound * radial_));
  r = std::clamp(r, 0, radial_ - 1);
  double theta = std::fmod(iwasawa(reduced).theta, kPi);
  if (theta < 0.0) theta += kPi;
  int f = std::clamp(static_cast<int>(std::floor(theta / kPi * fiber_)), 0, fiber_ - 1);
  return (k * radial_ + r) * fiber_ + f;
}

std::vector<double> CellPartition::histogram(const std::vector<Sl2Element>& reduced) const {
  std::vector<double> h(cell_count(), 0.0);
  if (reduced.empty()) return h;
  for (const auto& g : reduced) h[cell(g)] += 1.0;
  for (auto& v : h) v /= static_cast<double>(reduced.size());
  return h;
}

double CellPartition::total_variation(const std::vector<double>& histogram) const {
  if (histogram.size() != masses_.size()) throw ValidationError("total_variation: histogram size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) s += std::abs(histogram[i] - masses_[i]);
  return 0.5 * s;
}

}  // namespace equilab::fuchsian
