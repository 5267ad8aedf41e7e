#include "femtosim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "femtosim/specfun.hpp"

namespace femtosim {

namespace {

constexpr double kPi = 3.14159265358979323846;

const QuadRule& gauss32() {
  static const QuadRule rule = gauss_legendre(32);
  return rule;
}

template <typename F>
double gauss_panel(F&& f, double a, double b) {
  const QuadRule& g = gauss32();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 32; ++i) sum += g.weight[i] * f(mid + half * g.node[i]);
  return sum * half;
}

// Integrate f over [a, b] with panels graded toward both endpoints; the
// integrands below have square-root kinks only at segment ends.
template <typename F>
double integrate_segment(F&& f, double a, double b) {
  static const double frac[] = {0.0,   1e-6, 1e-4, 1e-2, 0.1, 0.5,
                                0.9, 0.99, 0.9999, 0.999999, 1.0};
  const int m = static_cast<int>(sizeof(frac) / sizeof(frac[0]));
  double sum = 0.0;
  for (int i = 0; i + 1 < m; ++i) {
    const double lo = a + (b - a) * frac[i];
    const double hi = a + (b - a) * frac[i + 1];
    if (hi > lo) sum += gauss_panel(f, lo, hi);
  }
  return sum;
}

// Angular measure (in radians, out of 2*pi) of { phi : delta(r, phi) <= kp }
// on the circle of radius r about the origin, with the FAP at distance d.
double angular_measure(double kp, double r, double d) {
  if (r <= 0.0) return 2.0 * kPi;
  const double c = (r * r + d * d - (r / kp) * (r / kp)) / (2.0 * r * d);
  if (c >= 1.0) return 2.0 * kPi;
  if (c <= -1.0) return 0.0;
  return 2.0 * (kPi - std::acos(c));
}

// Area of { u in S_m : delta(u) <= kp }, by radial integration with exact
// splits at the tangency radii of the level circle delta = kp.
double level_area(double kp, double d, double R) {
  double splits[2];
  int nsplit = 0;
  splits[nsplit++] = kp * d / (1.0 + kp);
  if (kp != 1.0) splits[nsplit++] = kp * d / std::fabs(1.0 - kp);
  double edges[4] = {0.0, R, R, R};
  int ne = 1;
  std::sort(splits, splits + nsplit);
  for (int i = 0; i < nsplit; ++i)
    if (splits[i] > 0.0 && splits[i] < R) edges[ne++] = splits[i];
  edges[ne++] = R;
  std::sort(edges, edges + ne);
  double area = 0.0;
  for (int i = 0; i + 1 < ne; ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    area += integrate_segment(
        [&](double r) { return angular_measure(kp, r, d) * r; }, edges[i],
        edges[i + 1]);
  }
  return area;
}

}  // namespace

Disk apollonius_disk(const Point& fap, double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw std::invalid_argument("apollonius_disk: need 0 <= k < 1");
  const double scale = 1.0 / (1.0 - k * k);
  const double d = std::sqrt(fap.x * fap.x + fap.y * fap.y);
  return Disk{Point{fap.x * scale, fap.y * scale}, k * d * scale};
}

Disk coverage_disk(const Point& fap, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("coverage_disk: need 0 < kappa < 1");
  return apollonius_disk(fap, kappa);
}

Disk coverage_disk(double d, double kappa) {
  return coverage_disk(Point{d, 0.0}, kappa);
}

Disk exclusion_disk(const Point& fap, double kappa_o) {
  if (!(kappa_o >= 0.0 && kappa_o < 1.0))
    throw std::invalid_argument("exclusion_disk: need 0 <= kappa_o < 1");
  return apollonius_disk(fap, kappa_o);
}

Disk exclusion_disk(double d, double kappa_o) {
  return exclusion_disk(Point{d, 0.0}, kappa_o);
}

double delta_ratio(const Point& u, const Point& fap) {
  const double num = std::sqrt(u.x * u.x + u.y * u.y);
  const double den = dist(u, fap);
  if (den == 0.0)
    throw std::domain_error("delta_ratio: user coincides with the FAP");
  return num / den;
}

PartitionGrid PartitionGrid::geometric(double kappa, int t) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("PartitionGrid: need 0 < kappa < 1");
  if (t < 1) throw std::invalid_argument("PartitionGrid: need t >= 1");
  PartitionGrid grid;
  grid.kappas.resize(t + 1);
  for (int i = 0; i <= t; ++i)
    grid.kappas[i] = std::pow(kappa, 1.0 - static_cast<double>(i) / t);
  grid.kappas[0] = kappa;
  grid.kappas[t] = 1.0;
  grid.validate();
  return grid;
}

void PartitionGrid::validate() const {
  if (kappas.size() < 2)
    throw std::invalid_argument("PartitionGrid: need at least two levels");
  if (!(kappas.front() > 0.0 && kappas.front() < 1.0))
    throw std::invalid_argument("PartitionGrid: kappas[0] must lie in (0, 1)");
  if (kappas.back() != 1.0)
    throw std::invalid_argument("PartitionGrid: kappas must end at 1");
  for (std::size_t i = 0; i + 1 < kappas.size(); ++i)
    if (!(kappas[i] < kappas[i + 1]))
      throw std::invalid_argument("PartitionGrid: kappas must be increasing");
}

DeltaBracket quantize_delta(double delta, const PartitionGrid& grid) {
  grid.validate();
  const auto& k = grid.kappas;
  if (!(delta > 0.0))
    throw std::domain_error("quantize_delta: delta must be > 0");
  const double top = 1.0 / k.front();
  if (delta > top) {
    if (delta > top * (1.0 + 1e-12))
      throw std::domain_error("quantize_delta: delta above 1/kappa_0");
    delta = top;
  }
  if (delta <= k.front()) return DeltaBracket{0.0, k.front()};
  if (delta <= 1.0) {
    // First level >= delta closes the cell (k_i, k_{i+1}].
    const auto it = std::lower_bound(k.begin(), k.end(), delta);
    return DeltaBracket{*(it - 1), *it};
  }
  // Reciprocal side: 1/delta in [k_j, k_{j+1}) maps to (1/k_{j+1}, 1/k_j].
  const double x = 1.0 / delta;
  const auto it = std::upper_bound(k.begin(), k.end(), x);
  return DeltaBracket{1.0 / *it, 1.0 / *(it - 1)};
}

double PartitionProbs::sum() const noexcept {
  double s = p0;
  for (double v : p_plus) s += v;
  for (double v : p_minus) s += v;
  return s;
}

PartitionProbs partition_probs(double d, const PartitionGrid& grid, double R,
                               PartitionExclusion excl) {
  grid.validate();
  if (!(d > 0.0 && d < R))
    throw std::invalid_argument("partition_probs: need 0 < d < R");
  const auto& k = grid.kappas;
  const int t = grid.t();

  // Cumulative areas F(kp) = |{delta <= kp}| for every threshold.
  std::vector<double> f_low(t + 1), f_high(t + 1);
  for (int i = 0; i <= t; ++i) f_low[i] = level_area(k[i], d, R);
  for (int i = 0; i <= t; ++i) f_high[i] = level_area(1.0 / k[i], d, R);

  const double uncovered = f_high[0];
  const double denom =
      excl == PartitionExclusion::tagged_coverage ? uncovered : kPi * R * R;

  PartitionProbs probs;
  probs.p0 = f_low[0] / denom;
  probs.p_minus.resize(t);
  probs.p_plus.resize(t);
  for (int i = 1; i <= t; ++i) {
    probs.p_minus[i - 1] = std::max(0.0, f_low[i] - f_low[i - 1]) / denom;
    probs.p_plus[i - 1] = std::max(0.0, f_high[i - 1] - f_high[i]) / denom;
  }
  return probs;
}

}  // namespace femtosim
