// Closed-form outage bounds and the Laplace transforms behind them.
//
// Class counts for a tagged FAP at distance d from the macro base station:
//   N1 ~ Poisson(nbar_mu_d(d))   macro users in its admissible coverage region
//   N2 ~ Poisson(nbar_fu)        its femto users
//   N_served = min(N1, (n_c - N2)+),  N_ns = N1 - N_served
// The service event E = { N_served >= 1 } conditions the femto-side outage.

#pragma once

#include <cstdint>

#include "femtosim/geometry.hpp"
#include "femtosim/params.hpp"

namespace femtosim {

// E[exp(-s * N_ns)] by truncated double summation (absolute error < 1e-10).
// With given_service the expectation is conditional on E.
double laplace_ns_exact(double s, double d, const NetworkParams& p,
                        bool given_service = false);

// Closed-form upper bound on the unconditional transform.
double laplace_ns_upper(double s, double d, const NetworkParams& p);

struct LaplaceBracket {
  double lb = 0.0;
  double ub = 0.0;
};

// Bracket for E[exp(-s * N_mbs)] where N_mbs counts the macro users left to
// the macro base station after every FAP has admitted its share.
LaplaceBracket laplace_mbs_bracket(double s, const NetworkParams& p);

// Quantization grid and cell probabilities for a tagged distance d, shared
// by the theorem evaluations at that distance.
struct BoundInputs {
  double d = 0.0;
  PartitionGrid grid;
  PartitionProbs probs;

  static BoundInputs make(const NetworkParams& p, double d, int grid_t = 8);
};

// Mean attenuation factor of a non-covered macro interferer, using the
// upper (q1) or lower (q2) quantization endpoint of its distance ratio.
double q1_mix(double theta, const NetworkParams& p, const BoundInputs& in);
double q2_mix(double theta, const NetworkParams& p, const BoundInputs& in);

// Which transform of N_ns enters the theorems: the exact double sum
// (conditioned on E) or the closed-form upper bound.
enum class PhiMode { exact, upper };

// Upper bound on the outage of a macro user served by the tagged FAP.
//
// In exact mode the co-cell and not-served factors are evaluated jointly
// as E[a^(N2 + N_served - 1) * b^N_ns | E], which stays a valid upper
// bound and saturates once n_c exceeds the realistic user load; upper mode
// uses the literal worst-case a^(n_c - 1) times the closed-form transform
// bound, which degrades towards 1 as n_c grows.
double thm1_upper(double theta, double d, const NetworkParams& p,
                  const BoundInputs& in, PhiMode phi = PhiMode::exact);

// Scale parameters of the lower-bound integrand; gamma4 is the expectation
// of exp(D1^2 * (g1 - g2 g3 D1^a / (D2^a + g2 D1^a))) over a uniformly
// placed interfering FAP (D1 to the MBS, D2 to the tagged FAP).
struct Gamma123 {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

Gamma123 thm2_gammas(double theta, const NetworkParams& p,
                     const BoundInputs& in);

struct Thm2Result {
  double lb = 0.0;     // clipped to [0, 1]
  double chi = 0.0;
  double q2 = 0.0;
};

Thm2Result thm2_lower(double theta, double d, const NetworkParams& p,
                      const BoundInputs& in, double gamma4,
                      PhiMode phi = PhiMode::exact);

// Bracket for the outage of a macro user served by the macro base station.
struct Thm3Result {
  double lb = 0.0;       // clipped
  double ub = 0.0;       // clipped
  double lb_raw = 0.0;   // before clipping
  double ub_raw = 0.0;
  double eps = 0.0;      // bound on P(no MBS-served macro user)
};

Thm3Result thm3_bounds(double theta, const NetworkParams& p);

// Pointwise bracket for the conditional pdf of the distance to the MBS of
// a macro user covered by no FAP.  Valid for kappa <= 1/2.
struct PdfBracket {
  double lb = 0.0;
  double ub = 0.0;
};

PdfBracket pdf_du_bounds(double d, const NetworkParams& p);

}  // namespace femtosim
