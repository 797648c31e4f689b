#pragma once

#include <cstdint>
#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "equilab/sl2.hpp"

namespace equilab::fuchsian {

/// Coset representative γ·g of Γg with γ·g·i in the Dirichlet domain.
struct ReducedPoint {
  Sl2Element g;
  Sl2Element gamma;       // accumulated γ, so g = gamma · input
  std::vector<int> word;  // side pairings applied on the left, in order (+k: g_k, -k: g_k^{-1}, 1-based)
};

/// Polar coordinates (ρ, ϕ) of a point of the hyperbolic plane around the domain center, in the disk model.
struct Polar {
  double rho = 0.0;
  double phi = 0.0;
};

/// Cocompact Fuchsian group given by side-pairing generators of a Dirichlet domain.
class FuchsianGroup {
 public:
  static constexpr std::size_t kMaxReductionSteps = 100000;

  FuchsianGroup(std::vector<Sl2Element> generators, std::vector<int> relator,
                UpperHalfPoint center = UpperHalfPoint(0.0, 1.0), std::string name = "");

  /// Regular-octagon group of the genus-2 Bolza surface, generators in closed form.
  static FuchsianGroup bolza();
  static FuchsianGroup from_json(const nlohmann::json& j);
  static FuchsianGroup load(const std::string& path);

  const std::string& name() const { return name_; }
  const std::vector<Sl2Element>& generators() const { return generators_; }
  /// Generators followed by their inverses.
  const std::vector<Sl2Element>& side_pairings() const { return pairings_; }
  int pairing_label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& relator() const { return relator_; }
  const UpperHalfPoint& center() const { return center_; }

  /// Product of side pairings for a signed 1-based word.
  Sl2Element word_element(const std::vector<int>& word) const;

  /// cosh d(g·i, center).
  double cosh_distance(const Mat2& g) const;
  double distance(const Sl2Element& g) const;

  ReducedPoint reduce(const Sl2Element& g) const;
  /// Same as reduce but returns only the representative.
  Sl2Element reduce_fast(const Sl2Element& g) const;

  /// Distinct elements γ (modulo ±I) with d(γ·center, center) ≤ radius, identity first.
  std::vector<Sl2Element> shell(double radius) const;

  Polar polar(const UpperHalfPoint& z) const;
  /// Distance from the center to the Dirichlet boundary in direction ϕ.
  double boundary_radius(double phi) const;
  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }
  /// Hyperbolic area of the Dirichlet domain, by quadrature of the boundary.
  double area() const { return area_; }

 private:
  std::string name_;
  std::vector<Sl2Element> generators_, pairings_;
  std::vector<int> labels_, relator_;
  UpperHalfPoint center_;
  Sl2Element center_lift_inv_;
  std::vector<double> bisector_tanh_, bisector_dir_;
  double inradius_ = 0.0, circumradius_ = 0.0, area_ = 0.0;
};

/// Reduced representative of g·exp(tX), reducing after every flow step of length ≤ max_step.
Sl2Element flow_reduce(const FuchsianGroup& grp, Sl2Element g, double t, double max_step = 1.0);

/// reduce(q·exp(sΘ)·exp(tX)) for each s, using interleaved reduction.
std::vector<ReducedPoint> geodesic_circle_points(const FuchsianGroup& grp, const Sl2Element& q, double t,
                                                 const std::vector<double>& s_grid);

/// Haar-distributed reduced points of Γ\SL(2,R) (fiber angle uniform on [0, π)).
std::vector<Sl2Element> sample_haar(const FuchsianGroup& grp, std::size_t n, std::uint64_t seed);

/// Partition of Dirichlet domain × fiber into angular sectors, equal-area radial bins and fiber-angle bins.
class CellPartition {
 public:
  CellPartition(std::shared_ptr<const FuchsianGroup> grp, int sectors = 8, int radial = 2, int fiber = 4);

  int cell_count() const { return sectors_ * radial_ * fiber_; }
  /// Cell index of a reduced representative.
  int cell(const Sl2Element& reduced) const;
  /// Invariant-volume masses, summing to 1.
  const std::vector<double>& masses() const { return masses_; }
  std::vector<double> histogram(const std::vector<Sl2Element>& reduced) const;
  double total_variation(const std::vector<double>& histogram) const;

 private:
  std::shared_ptr<const FuchsianGroup> grp_;
  int sectors_, radial_, fiber_;
  std::vector<double> masses_;
};

}  // namespace equilab::fuchsian
