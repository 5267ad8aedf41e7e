// Fading, uplink interference and the outage test.
//
// Transmit power is controlled so that the serving station receives p_f
// (femto tier) or p_m = 1 (macro tier) before fading; at any other station
// the received power scales by (distance to server / distance to observer)
// ^ alpha.  In the default deterministic model each interferer is
// attenuated by the full spreading gain g = n_s * n_h; collision mode
// instead lands each interferer on the victim's subchannel with
// probability 1 / n_h at power / n_s, which has the same mean.  The
// victim's signal occupies one subband, i.e. power / n_s.

#pragma once

#include <cstdint>

#include "femtosim/access.hpp"
#include "femtosim/deployment.hpp"

namespace femtosim {

// simplified restricts the interferer set (co-cell plus MBS-served users
// at a FAP victim, MBS peers at the MBS); full adds every other FAP's
// attached users; collision keeps the full set but draws per-interferer
// subchannel collisions instead of dividing by n_h.
enum class InterferenceMode { full, simplified, collision };

// |H|^2, exponential with mean sigma2.
inline double sample_fading(const NetworkParams& p, RngStream& rng) {
  return rng.exponential(p.sigma2);
}

// Aggregate interference observed at the tagged FAP while it serves
// victim_mu.  Simplified mode keeps co-cell users and MBS-served macro
// users; full and collision modes add the users attached to every other
// FAP (femto user positions must have been sampled).
double interference_at_tagged_fap(const Realization& r, const Assignment& a,
                                  std::size_t victim_mu,
                                  const NetworkParams& p, InterferenceMode mode,
                                  RngStream& rng);

// Aggregate interference observed at the macro base station while it serves
// victim_mu.  Simplified mode keeps the other MBS-served macro users; full
// and collision modes add every FAP-attached user.
double interference_at_mbs(const Realization& r, const Assignment& a,
                           std::size_t victim_mu, const NetworkParams& p,
                           InterferenceMode mode, RngStream& rng);

// Outage test: received signal power / n_s under threshold theta times the
// interference.  Zero interference never causes outage.
inline bool sir_outage(double station_power, double fading, double interference,
                       const NetworkParams& p) {
  return station_power * fading / p.n_s < p.theta * interference;
}

}  // namespace femtosim
