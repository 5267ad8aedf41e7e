#include "femtosim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace femtosim {

namespace {

// (d(u, server) / d(u, observer))^alpha, the power-control scaling of a
// transmission aimed at `server` as heard by `observer`.
inline double heard_scale(const Point& u, const Point& server,
                          const Point& observer, double alpha) {
  return std::pow(dist2(u, server) / dist2(u, observer), 0.5 * alpha);
}

// One interferer's faded contribution given its pre-spreading received
// power.  Collision mode consumes one uniform plus one fading draw per
// interferer whether or not it hits, so the stream layout is fixed.
inline double interferer_term(double power, const NetworkParams& p,
                              InterferenceMode mode, RngStream& rng) {
  if (mode == InterferenceMode::collision) {
    const bool hit = rng.uniform01() < 1.0 / p.n_h;
    const double h = sample_fading(p, rng);
    return hit ? power * h / p.n_s : 0.0;
  }
  return power * sample_fading(p, rng) / (p.n_s * p.n_h);
}

}  // namespace

double interference_at_tagged_fap(const Realization& r, const Assignment& a,
                                  std::size_t victim_mu,
                                  const NetworkParams& p, InterferenceMode mode,
                                  RngStream& rng) {
  if (!r.has_tagged())
    throw std::invalid_argument("interference_at_tagged_fap: no tagged FAP");
  if (a.serving.at(victim_mu) != r.tagged_fap)
    throw std::invalid_argument(
        "interference_at_tagged_fap: victim not served by the tagged FAP");
  const std::size_t tag = r.tagged_fap;
  const Point& at = r.faps[tag];
  const Point bm{0.0, 0.0};

  double total = 0.0;

  // Co-cell: the tagged FAP's femto users and its other admitted macro
  // users, all power-controlled to the tagged FAP itself.
  const std::uint64_t co =
      r.fu_counts[tag] + (a.served[tag].size() - 1);
  for (std::uint64_t i = 0; i < co; ++i)
    total += interferer_term(p.eta, p, mode, rng);

  // Macro users served by the MBS.
  for (std::size_t u = 0; u < r.mus.size(); ++u) {
    if (a.serving[u] != Assignment::mbs) continue;
    total += interferer_term(heard_scale(r.mus[u], bm, at, p.alpha), p, mode,
                             rng);
  }

  if (mode != InterferenceMode::simplified) {
    if (!r.fus_sampled)
      throw std::logic_error(
          "interference_at_tagged_fap: femto user positions not sampled");
    for (std::size_t i = 0; i < r.faps.size(); ++i) {
      if (i == tag) continue;
      for (const Point& q : r.fus[i])
        total += interferer_term(
            p.eta * heard_scale(q, r.faps[i], at, p.alpha), p, mode, rng);
      for (std::size_t u : a.served[i])
        total += interferer_term(
            p.eta * heard_scale(r.mus[u], r.faps[i], at, p.alpha), p, mode,
            rng);
    }
  }
  return total;
}

double interference_at_mbs(const Realization& r, const Assignment& a,
                           std::size_t victim_mu, const NetworkParams& p,
                           InterferenceMode mode, RngStream& rng) {
  if (a.serving.at(victim_mu) != Assignment::mbs)
    throw std::invalid_argument(
        "interference_at_mbs: victim not served by the MBS");
  const Point bm{0.0, 0.0};

  double total = 0.0;
  for (std::size_t u = 0; u < r.mus.size(); ++u) {
    if (u == victim_mu || a.serving[u] != Assignment::mbs) continue;
    total += interferer_term(1.0, p, mode, rng);
  }

  if (mode != InterferenceMode::simplified) {
    if (!r.fus_sampled)
      throw std::logic_error(
          "interference_at_mbs: femto user positions not sampled");
    for (std::size_t i = 0; i < r.faps.size(); ++i) {
      for (const Point& q : r.fus[i])
        total += interferer_term(
            p.eta * heard_scale(q, r.faps[i], bm, p.alpha), p, mode, rng);
      for (std::size_t u : a.served[i])
        total += interferer_term(
            p.eta * heard_scale(r.mus[u], r.faps[i], bm, p.alpha), p, mode,
            rng);
    }
  }
  return total;
}

}  // namespace femtosim
