#include "femtosim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "femtosim/access.hpp"
#include "femtosim/deployment.hpp"

namespace femtosim {

namespace {

// Attempts are processed in rounds of fixed chunks.  Workers race only for
// chunk indices; every chunk is evaluated serially and folded in chunk
// order, which keeps all outputs independent of the worker count.
constexpr std::uint64_t kChunk = 512;
constexpr std::uint64_t kChunksPerRound = 32;

struct ChunkTally {
  std::uint64_t conditioned = 0;
  std::uint64_t outages = 0;
};

// trial(i) -> -1 when the conditioning event fails, else 0 / 1 (outage).
template <typename TrialFn>
OutageEstimate run_conditioned(std::uint64_t target, unsigned threads,
                               const TrialFn& trial) {
  if (target == 0) throw std::invalid_argument("conditioned target must be positive");
  const std::uint64_t max_attempts =
      target > std::numeric_limits<std::uint64_t>::max() / 10000 ? std::numeric_limits<std::uint64_t>::max()
                                                                 : target * 10000;
  const unsigned workers = std::max(1u, threads);
  OutageEstimate est;
  std::vector<ChunkTally> tallies(kChunksPerRound);
  std::uint64_t next_attempt = 0;
  while (est.trials_conditioned < target) {
    if (next_attempt >= max_attempts)
      throw ConditioningError(
          "conditioning event too rare: attempt budget exhausted before the "
          "conditioned-trial target");
    const std::uint64_t round_base = next_attempt;
    std::atomic<std::uint64_t> cursor{0};
    auto work = [&]() {
      for (;;) {
        const std::uint64_t c = cursor.fetch_add(1, std::memory_order_relaxed);
        if (c >= kChunksPerRound) return;
        ChunkTally t;
        const std::uint64_t lo = round_base + c * kChunk;
        for (std::uint64_t i = lo; i < lo + kChunk; ++i) {
          const int r = trial(i);
          if (r >= 0) {
            ++t.conditioned;
            t.outages += static_cast<std::uint64_t>(r);
          }
        }
        tallies[c] = t;
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      for (std::thread& th : pool) th.join();
    }
    for (const ChunkTally& t : tallies) {
      est.trials_conditioned += t.conditioned;
      est.outages += t.outages;
    }
    next_attempt = round_base + kChunksPerRound * kChunk;
  }
  est.trials_total = next_attempt;
  est.p_hat = static_cast<double>(est.outages) /
              static_cast<double>(est.trials_conditioned);
  est.se = std::sqrt(est.p_hat * (1.0 - est.p_hat) /
                     static_cast<double>(est.trials_conditioned));
  return est;
}

}  // namespace

OutageEstimate estimate_outage_mu_fap(const NetworkParams& p,
                                      std::optional<double> d,
                                      std::uint64_t conditioned_target,
                                      InterferenceMode mode,
                                      const RngStream& base, unsigned threads) {
  p.validate();
  if (d && !(*d > 0.0 && *d < p.R))
    throw std::invalid_argument("tagged FAP distance must lie inside the cell");
  const double nbar_fu = p.nbar_fu();
  auto trial = [&p, &base, d, mode, nbar_fu](std::uint64_t attempt) -> int {
    const RngStream t = base.child("trial", attempt);
    {
      // Cheap pre-check: the femto users of the tagged FAP already fill the
      // backhaul.  Same substream sample_realization uses, so skipping the
      // rest of the deployment changes no draw.
      RngStream s = t.child("fu_n_tagged");
      if (s.poisson(nbar_fu) >= p.n_c) return -1;
    }
    double dt;
    if (d) {
      dt = *d;
    } else {
      RngStream s = t.child("d_f");
      dt = p.R * std::sqrt(s.uniform01());
    }
    Realization r = sample_realization(p, dt, t, false);
    const Assignment a = assign(r, p, t);
    const std::vector<std::size_t>& served = a.served[r.tagged_fap];
    if (served.empty()) return -1;
    std::size_t victim;
    {
      RngStream s = t.child("victim");
      victim = served[s.bounded(served.size())];
    }
    if (p.theta == 0.0) return 0;
    if (mode != InterferenceMode::simplified) fill_fu_positions(r, p, t);
    RngStream sig = t.child("fad_sig");
    const double fading = sample_fading(p, sig);
    RngStream irng = t.child("fad_int");
    const double intf = interference_at_tagged_fap(r, a, victim, p, mode, irng);
    return sir_outage(p.eta, fading, intf, p) ? 1 : 0;
  };
  return run_conditioned(conditioned_target, threads, trial);
}

OutageEstimate estimate_outage_mu_mbs(const NetworkParams& p,
                                      std::uint64_t conditioned_target,
                                      InterferenceMode mode,
                                      const RngStream& base, unsigned threads) {
  p.validate();
  auto trial = [&p, &base, mode](std::uint64_t attempt) -> int {
    const RngStream t = base.child("trial", attempt);
    Realization r = sample_realization(p, std::nullopt, t, false);
    const Assignment a = assign(r, p, t);
    std::vector<std::size_t> pool;
    pool.reserve(a.serving.size());
    for (std::size_t u = 0; u < a.serving.size(); ++u)
      if (a.serving[u] == Assignment::mbs) pool.push_back(u);
    if (pool.empty()) return -1;
    std::size_t victim;
    {
      RngStream s = t.child("victim");
      victim = pool[s.bounded(pool.size())];
    }
    if (p.theta == 0.0) return 0;
    if (mode != InterferenceMode::simplified) fill_fu_positions(r, p, t);
    RngStream sig = t.child("fad_sig");
    const double fading = sample_fading(p, sig);
    RngStream irng = t.child("fad_int");
    const double intf = interference_at_mbs(r, a, victim, p, mode, irng);
    return sir_outage(1.0, fading, intf, p) ? 1 : 0;
  };
  return run_conditioned(conditioned_target, threads, trial);
}

MeanEstimate estimate_gamma4(const NetworkParams& p, double d, double theta,
                             const BoundInputs& in, std::uint64_t samples,
                             const RngStream& base, unsigned threads) {
  p.validate();
  if (samples < 2) throw std::invalid_argument("gamma4 needs at least 2 samples");
  const Gamma123 g = thm2_gammas(theta, p, in);
  if (g.g1 * p.R * p.R > 700.0)
    throw std::overflow_error("gamma4 integrand overflows for these parameters");

  struct Partial {
    double sum = 0.0;
    double sum2 = 0.0;
  };
  const std::uint64_t nchunks = (samples + kChunk - 1) / kChunk;
  std::vector<Partial> partials(nchunks);
  std::atomic<std::uint64_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const std::uint64_t c = cursor.fetch_add(1, std::memory_order_relaxed);
      if (c >= nchunks) return;
      KahanSum s1, s2;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(samples, lo + kChunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        RngStream s = base.child("g4", i);
        const Point a = sample_point_in_disk(p.R, s);
        const double d1sq = a.x * a.x + a.y * a.y;
        const double d2sq = dist2(a, Point{d, 0.0});
        const double d1a = std::pow(d1sq, 0.5 * p.alpha);
        const double d2a = std::pow(d2sq, 0.5 * p.alpha);
        const double frac = g.g2 > 0.0 ? g.g2 * g.g3 * d1a / (d2a + g.g2 * d1a) : 0.0;
        const double v = std::exp(d1sq * (g.g1 - frac));
        s1.add(v);
        s2.add(v * v);
      }
      partials[c] = Partial{s1.value(), s2.value()};
    }
  };
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  KahanSum s1, s2;
  for (const Partial& pr : partials) {
    s1.add(pr.sum);
    s2.add(pr.sum2);
  }
  MeanEstimate est;
  est.n = samples;
  const double n = static_cast<double>(samples);
  est.mean = s1.value() / n;
  const double var = std::max(0.0, (s2.value() - n * est.mean * est.mean) / (n - 1.0));
  est.se = std::sqrt(var / n);
  return est;
}

MeanEstimate empirical_laplace(const std::vector<std::uint64_t>& samples,
                               double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("laplace argument must be >= 0");
  if (samples.size() < 2)
    throw std::invalid_argument("laplace estimate needs at least 2 samples");
  KahanSum s1, s2;
  for (std::uint64_t x : samples) {
    // x == 0 gives 1 even for s = inf.
    const double v = x == 0 ? 1.0 : std::exp(-s * static_cast<double>(x));
    s1.add(v);
    s2.add(v * v);
  }
  MeanEstimate est;
  est.n = samples.size();
  const double n = static_cast<double>(est.n);
  est.mean = s1.value() / n;
  const double var = std::max(0.0, (s2.value() - n * est.mean * est.mean) / (n - 1.0));
  est.se = std::sqrt(var / n);
  return est;
}

double mean_upper_confidence(const MeanEstimate& est, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("confidence delta must lie in (0, 1)");
  if (est.n < 2)
    throw std::invalid_argument("confidence bound needs at least 2 samples");
  // Maurer-Pontil: mean + sqrt(2 V log(2/d) / n) + 7 log(2/d) / (3 (n-1))
  // with V the unbiased sample variance; se = sqrt(V / n).
  const double l = std::log(2.0 / delta);
  const double n = static_cast<double>(est.n);
  return est.mean + est.se * std::sqrt(2.0 * l) + 7.0 * l / (3.0 * (n - 1.0));
}

ClassCountSamples sample_class_counts(const NetworkParams& p,
                                      std::optional<double> d,
                                      std::uint64_t realizations,
                                      const RngStream& base) {
  p.validate();
  ClassCountSamples out;
  out.served_tagged.reserve(realizations);
  out.ns_tagged.reserve(realizations);
  out.mbs_served.reserve(realizations);
  for (std::uint64_t i = 0; i < realizations; ++i) {
    const RngStream t = base.child("real", i);
    const Realization r = sample_realization(p, d, t, false);
    const Assignment a = assign(r, p, t);
    const UserClasses c = classify(r, a);
    out.served_tagged.push_back(c.served_tagged.size());
    out.ns_tagged.push_back(c.ns_tagged.size());
    out.mbs_served.push_back(a.mbs_served_count());
  }
  return out;
}

std::vector<double> sample_uncovered_distances(const NetworkParams& p,
                                               std::uint64_t count,
                                               const RngStream& base) {
  p.validate();
  std::vector<double> out;
  out.reserve(count);
  const double k2 = p.kappa * p.kappa;
  const std::uint64_t max_attempts = count > std::numeric_limits<std::uint64_t>::max() / 10000
                                         ? std::numeric_limits<std::uint64_t>::max()
                                         : count * 10000;
  for (std::uint64_t j = 0; out.size() < count; ++j) {
    if (j >= max_attempts)
      throw ConditioningError("uncovered-point acceptance rate too low");
    const RngStream t = base.child("pt", j);
    RngStream su = t.child("u");
    const Point u = sample_point_in_disk(p.R, su);
    RngStream sf = t.child("faps");
    const std::vector<Point> faps = sample_ppp_disk(p.lambda_f, p.R, sf);
    const double lim = k2 * (u.x * u.x + u.y * u.y);
    bool covered = false;
    for (const Point& f : faps) {
      if (dist2(u, f) <= lim) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back(std::sqrt(u.x * u.x + u.y * u.y));
  }
  return out;
}

Histogram histogram_density(const std::vector<double>& xs, double lo, double hi,
                            int bins) {
  if (!(hi > lo) || bins < 1) throw std::invalid_argument("bad histogram range");
  Histogram h;
  h.n = xs.size();
  h.edges.resize(bins + 1);
  const double w = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[b] = lo + w * b;
  h.edges.back() = hi;
  std::vector<std::uint64_t> counts(bins, 0);
  for (double x : xs) {
    if (x < lo || x > hi) continue;
    int b = static_cast<int>((x - lo) / w);
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  h.density.resize(bins);
  h.se.resize(bins);
  const double n = static_cast<double>(h.n);
  for (int b = 0; b < bins; ++b) {
    const double frac = n > 0 ? static_cast<double>(counts[b]) / n : 0.0;
    h.density[b] = frac / w;
    h.se[b] = n > 0 ? std::sqrt(frac * (1.0 - frac) / n) / w : 0.0;
  }
  return h;
}

double ks_vs_radial_cdf(std::vector<double> xs, double R) {
  if (xs.empty()) throw std::invalid_argument("empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] / R) * (xs[i] / R);
    ks = std::max(ks, std::max(f - static_cast<double>(i) / n,
                               static_cast<double>(i + 1) / n - f));
  }
  return ks;
}

}  // namespace femtosim
