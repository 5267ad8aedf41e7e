// Plane geometry for a single macrocell.
//
// The macro base station sits at the origin; the cell is the closed disk of
// radius R around it.  A femto access point (FAP) at position a controls the
// Apollonius disk { u : d(u,a) <= k * d(u,0) }, which is a true disk for
// 0 <= k < 1.  The interference ratio of a user u relative to a FAP is
// delta(u) = d(u,0) / d(u,a); coverage of the FAP corresponds to
// delta >= 1/k.

#pragma once

#include <cmath>
#include <vector>

namespace femtosim {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist2(const Point& a, const Point& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(const Point& a, const Point& b) noexcept {
  return std::sqrt(dist2(a, b));
}

struct Disk {
  Point center;
  double radius = 0.0;

  bool contains(const Point& p) const noexcept {
    return dist2(p, center) <= radius * radius;
  }
};

// Disk of points whose distance to `fap` is at most k times their distance
// to the origin.  Requires 0 <= k < 1.
Disk apollonius_disk(const Point& fap, double k);

// Coverage disk of a FAP with handover ratio kappa in (0, 1).
Disk coverage_disk(const Point& fap, double kappa);
// Convenience form for a FAP on the +x axis at distance d.
Disk coverage_disk(double d, double kappa);

// No-go disk around a FAP below the minimum access ratio kappa_o in [0, 1).
Disk exclusion_disk(const Point& fap, double kappa_o);
Disk exclusion_disk(double d, double kappa_o);

// delta(u) = d(u, origin) / d(u, fap).  Throws if u coincides with the FAP.
double delta_ratio(const Point& u, const Point& fap);

// Quantization grid kappa = k_0 < k_1 < ... < k_t = 1.
struct PartitionGrid {
  std::vector<double> kappas;

  // Geometric spacing k_i = kappa^(1 - i/t); the default resolution used by
  // the closed-form bounds.
  static PartitionGrid geometric(double kappa, int t = 8);

  int t() const noexcept { return static_cast<int>(kappas.size()) - 1; }
  void validate() const;
};

// Deterministic bracket lb <= delta <= ub with endpoints on the grid or its
// reciprocals.
struct DeltaBracket {
  double lb = 0.0;
  double ub = 0.0;
};

DeltaBracket quantize_delta(double delta, const PartitionGrid& grid);

// Probability that a uniformly placed non-covered user lands in each
// quantization cell, for a tagged FAP at distance d from the origin.
//
//   p0          = P(delta <= k_0)
//   p_minus[i-1] = P(k_{i-1} < delta <= k_i),       i = 1..t
//   p_plus[i-1]  = P(1/k_i < delta <= 1/k_{i-1}),   i = 1..t
//
// With tagged_coverage exclusion the law is uniform on the cell minus the
// tagged FAP's coverage disk and the probabilities sum to 1; with no
// exclusion they sum to 1 minus the covered fraction.
enum class PartitionExclusion { none, tagged_coverage };

struct PartitionProbs {
  double p0 = 0.0;
  std::vector<double> p_plus;
  std::vector<double> p_minus;

  double sum() const noexcept;
};

PartitionProbs partition_probs(
    double d, const PartitionGrid& grid, double R,
    PartitionExclusion excl = PartitionExclusion::tagged_coverage);

}  // namespace femtosim
