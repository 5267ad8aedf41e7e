#include "femtosim/deployment.hpp"

#include <cmath>
#include <stdexcept>

namespace femtosim {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

Point sample_point_in_disk(double R, RngStream& rng) {
  const double r = R * std::sqrt(rng.uniform01());
  const double phi = kTwoPi * rng.uniform01();
  return Point{r * std::cos(phi), r * std::sin(phi)};
}

std::vector<Point> sample_ppp_disk(double density, double R, RngStream& rng) {
  const double mean = NetworkParams::pi() * R * R * density;
  const std::uint64_t n = rng.poisson(mean);
  std::vector<Point> pts(n);
  for (auto& pt : pts) pt = sample_point_in_disk(R, rng);
  return pts;
}

std::vector<Point> sample_fu_ring(const Point& fap, const NetworkParams& p,
                                  RngStream& rng) {
  const double lo2 = p.r_f * p.r_f;
  const double hi2 = (p.r_f + p.delta) * (p.r_f + p.delta);
  const std::uint64_t n = rng.poisson(p.nbar_fu());
  std::vector<Point> pts(n);
  for (auto& pt : pts) {
    const double r = std::sqrt(lo2 + (hi2 - lo2) * rng.uniform01());
    const double phi = kTwoPi * rng.uniform01();
    pt = Point{fap.x + r * std::cos(phi), fap.y + r * std::sin(phi)};
  }
  return pts;
}

Realization sample_realization(const NetworkParams& p, std::optional<double> d_tag,
                               const RngStream& base, bool with_fu_positions) {
  p.validate();
  Realization out;

  {
    RngStream s = base.child("faps");
    out.faps = sample_ppp_disk(p.lambda_f, p.R, s);
  }
  if (d_tag) {
    if (!(*d_tag >= 0.0 && *d_tag <= p.R))
      throw std::invalid_argument("sample_realization: d_tag outside the cell");
    RngStream s = base.child("tagged_angle");
    const double phi = kTwoPi * s.uniform01();
    out.faps.push_back(Point{*d_tag * std::cos(phi), *d_tag * std::sin(phi)});
    out.tagged_fap = out.faps.size() - 1;
  }

  // The tagged FAP draws from index-independent labels so its femto-user
  // count can be pre-drawn before the other FAPs are even sampled.
  out.fu_counts.resize(out.faps.size());
  for (std::size_t i = 0; i < out.faps.size(); ++i) {
    RngStream s = i == out.tagged_fap ? base.child("fu_n_tagged")
                                      : base.child("fu_n", i);
    out.fu_counts[i] = s.poisson(p.nbar_fu());
  }

  {
    RngStream s = base.child("mus");
    std::vector<Point> raw = sample_ppp_disk(p.mu_m, p.R, s);
    const double ko2 = p.kappa_o * p.kappa_o;
    out.mus.reserve(raw.size());
    for (const Point& u : raw) {
      const double r2 = u.x * u.x + u.y * u.y;
      bool keep = true;
      for (const Point& a : out.faps) {
        if (dist2(u, a) < ko2 * r2) {
          keep = false;
          break;
        }
      }
      if (keep) out.mus.push_back(u);
    }
  }

  out.fus.resize(out.faps.size());
  if (with_fu_positions) fill_fu_positions(out, p, base);
  return out;
}

void fill_fu_positions(Realization& r, const NetworkParams& p,
                       const RngStream& base) {
  if (r.fus_sampled) return;
  r.fus.resize(r.faps.size());
  const double lo2 = p.r_f * p.r_f;
  const double hi2 = (p.r_f + p.delta) * (p.r_f + p.delta);
  for (std::size_t i = 0; i < r.faps.size(); ++i) {
    RngStream s = i == r.tagged_fap ? base.child("fu_pos_tagged")
                                    : base.child("fu_pos", i);
    const std::uint64_t n = r.fu_counts[i];
    auto& pts = r.fus[i];
    pts.resize(n);
    for (auto& pt : pts) {
      const double rad = std::sqrt(lo2 + (hi2 - lo2) * s.uniform01());
      const double phi = kTwoPi * s.uniform01();
      pt = Point{r.faps[i].x + rad * std::cos(phi),
                 r.faps[i].y + rad * std::sin(phi)};
    }
  }
  r.fus_sampled = true;
}

}  // namespace femtosim
