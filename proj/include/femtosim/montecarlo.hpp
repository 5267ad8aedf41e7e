// Monte Carlo outage estimators and empirical validators.
//
// Every trial owns the substream base.child("trial", i), so estimates are
// bit-identical for any worker-thread count: workers claim fixed-size
// chunks, per-chunk tallies are folded in chunk order, and runs proceed in
// whole rounds until the conditioned-trial target is met.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "femtosim/bounds.hpp"
#include "femtosim/channel.hpp"

namespace femtosim {

// Raised when the attempt budget runs out before enough conditioned trials.
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) noexcept {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const noexcept { return sum; }
};

struct OutageEstimate {
  double p_hat = 0.0;
  double se = 0.0;
  std::uint64_t trials_total = 0;
  std::uint64_t trials_conditioned = 0;
  std::uint64_t outages = 0;
};

// Outage frequency of a macro user served by the tagged FAP, conditioned by
// rejection on the FAP serving at least one macro user.  `d` fixes the
// tagged distance; empty means a fresh radial draw (2r/R^2) per trial.
// Runs until `conditioned_target` conditioned trials have accumulated;
// throws if the acceptance rate collapses.
OutageEstimate estimate_outage_mu_fap(const NetworkParams& p,
                                      std::optional<double> d,
                                      std::uint64_t conditioned_target,
                                      InterferenceMode mode,
                                      const RngStream& base,
                                      unsigned threads = 1);

// Outage frequency of a macro user served by the macro base station,
// conditioned on at least one such user existing.
OutageEstimate estimate_outage_mu_mbs(const NetworkParams& p,
                                      std::uint64_t conditioned_target,
                                      InterferenceMode mode,
                                      const RngStream& base,
                                      unsigned threads = 1);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t n = 0;
};

// gamma4 of the lower bound: expectation over a uniform interfering FAP.
MeanEstimate estimate_gamma4(const NetworkParams& p, double d, double theta,
                             const BoundInputs& in, std::uint64_t samples,
                             const RngStream& base, unsigned threads = 1);

// Mean of exp(-s x) with its standard error.
MeanEstimate empirical_laplace(const std::vector<std::uint64_t>& samples,
                               double s);

// Distribution-free upper confidence bound (empirical Bernstein) for the
// mean of a [0, 1]-valued sample at confidence 1 - delta.  Unlike the
// normal approximation it stays valid when the mean is carried by tail
// events too rare to appear in the sample, at the cost of an additive
// O(log(1/delta)/n) floor.
double mean_upper_confidence(const MeanEstimate& est, double delta);

// Per-realization class counts for distribution checks.
struct ClassCountSamples {
  std::vector<std::uint64_t> served_tagged;
  std::vector<std::uint64_t> ns_tagged;
  std::vector<std::uint64_t> mbs_served;
};

ClassCountSamples sample_class_counts(const NetworkParams& p,
                                      std::optional<double> d,
                                      std::uint64_t realizations,
                                      const RngStream& base);

// Distances to the MBS of uniform points lying in no FAP's coverage disk
// (fresh FAP process per point, rejection on coverage).
std::vector<double> sample_uncovered_distances(const NetworkParams& p,
                                               std::uint64_t count,
                                               const RngStream& base);

struct Histogram {
  std::vector<double> edges;    // size bins + 1
  std::vector<double> density;  // per bin
  std::vector<double> se;       // per bin
  std::uint64_t n = 0;
};

Histogram histogram_density(const std::vector<double>& xs, double lo, double hi,
                            int bins);

// Kolmogorov-Smirnov distance against the radial cdf (x/R)^2.
double ks_vs_radial_cdf(std::vector<double> xs, double R);

}  // namespace femtosim
