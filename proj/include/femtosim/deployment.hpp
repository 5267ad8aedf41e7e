// Random deployments: FAPs and macro users as Poisson processes on the
// macrocell disk, femto users on a ring around their FAP, and hard-core
// thinning of macro users below the minimum access ratio.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "femtosim/geometry.hpp"
#include "femtosim/params.hpp"
#include "femtosim/rng.hpp"

namespace femtosim {

struct Realization {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Point> faps;
  std::size_t tagged_fap = npos;            // index into faps, or npos
  std::vector<Point> mus;                   // macro users after thinning
  std::vector<std::uint64_t> fu_counts;     // femto users per FAP
  std::vector<std::vector<Point>> fus;      // femto-user positions per FAP
  bool fus_sampled = false;

  bool has_tagged() const noexcept { return tagged_fap != npos; }
};

// Uniform point on the disk of radius R about the origin (two draws).
Point sample_point_in_disk(double R, RngStream& rng);

// Homogeneous PPP of the given density on the disk of radius R.
std::vector<Point> sample_ppp_disk(double density, double R, RngStream& rng);

// Femto users of one FAP: PPP of density mu_f on the closed ring
// [r_f, r_f + delta] around the FAP position (not clipped to the cell).
std::vector<Point> sample_fu_ring(const Point& fap, const NetworkParams& p,
                                  RngStream& rng);

// Full deployment.  When d_tag is set, one extra FAP is placed at that
// distance from the origin in a uniformly random direction and marked
// tagged.  Draws are organized in labeled substreams of `base`, so femto
// user positions can be skipped here and filled later without disturbing
// any other draw.
Realization sample_realization(const NetworkParams& p, std::optional<double> d_tag,
                               const RngStream& base,
                               bool with_fu_positions = true);

// Fill Realization::fus using the same substreams sample_realization would
// have used.  No-op if positions were already sampled.
void fill_fu_positions(Realization& r, const NetworkParams& p,
                       const RngStream& base);

}  // namespace femtosim
