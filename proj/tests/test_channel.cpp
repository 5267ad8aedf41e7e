#include <cmath>
#include <vector>

#include "doctest.h"
#include "femtosim/channel.hpp"
#include "oracles.hpp"

using namespace femtosim;

namespace {

// Tagged FAP at (800, 0) serving mus[0]; mus[1] is MBS-served at distance
// ratio 5; one co-cell femto user; a second FAP at (-300, 400) with one
// femto user and no admitted macro users.
struct Fixture {
  Realization r;
  Assignment a;

  Fixture() {
    r.faps = {Point{800.0, 0.0}, Point{-300.0, 400.0}};
    r.tagged_fap = 0;
    r.mus = {Point{790.0, 0.0}, Point{2000.0 / 3.0, 0.0}};
    r.fu_counts = {1, 1};
    r.fus = {{}, {Point{-300.0, 412.0}}};
    r.fus_sampled = true;
    a.candidate = {0, Assignment::mbs};
    a.serving = {0, Assignment::mbs};
    a.served = {{0}, {}};
  }
};

}  // namespace

TEST_CASE("single MBS-served interferer carries delta^alpha over the gain") {
  Fixture f;
  f.r.fu_counts[0] = 0;  // leave only the macro interferer
  NetworkParams p;
  RngStream s = RngStream::root(51).child("one");
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += interference_at_tagged_fap(f.r, f.a, 0, p,
                                      InterferenceMode::simplified, s);
  // delta = |u| / |u - a| = 5, so the mean weight is 5^4 / (n_s n_h).
  const double mean = std::pow(5.0, 4.0) / p.spreading_gain() * p.sigma2;
  CHECK(std::fabs(sum / n - mean) < 3.0 * mean / std::sqrt(n));
}

TEST_CASE("co-cell interferers each contribute eta over the gain") {
  Fixture f;
  f.r.mus = {Point{790.0, 0.0}};  // drop the MBS interferer
  f.a.candidate = {0};
  f.a.serving = {0};
  f.r.fu_counts[0] = 3;
  NetworkParams p;
  RngStream s = RngStream::root(52).child("co");
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += interference_at_tagged_fap(f.r, f.a, 0, p,
                                      InterferenceMode::simplified, s);
  const double mean = 3.0 * p.eta / p.spreading_gain() * p.sigma2;
  CHECK(std::fabs(sum / n - mean) < 3.0 * mean / std::sqrt(n));
}

TEST_CASE("victim alone sees zero interference") {
  Fixture f;
  f.r.mus = {Point{790.0, 0.0}};
  f.a.candidate = {0};
  f.a.serving = {0};
  f.r.fu_counts = {0, 0};
  NetworkParams p;
  RngStream s = RngStream::root(53).child("z");
  CHECK(interference_at_tagged_fap(f.r, f.a, 0, p,
                                   InterferenceMode::simplified, s) == 0.0);
  CHECK(!sir_outage(p.eta, 0.0, 0.0, p));
}

TEST_CASE("full mode adds only other-FAP terms") {
  Fixture f;
  NetworkParams p;
  // Same substream: simplified consumes a prefix of the full draw sequence.
  RngStream s1 = RngStream::root(54).child("m");
  RngStream s2 = RngStream::root(54).child("m");
  const double simp =
      interference_at_tagged_fap(f.r, f.a, 0, p, InterferenceMode::simplified, s1);
  const double full =
      interference_at_tagged_fap(f.r, f.a, 0, p, InterferenceMode::full, s2);
  CHECK(full > simp);

  // With the other FAP unloaded the two modes coincide draw for draw.
  f.r.fus[1].clear();
  f.r.fu_counts[1] = 0;
  RngStream s3 = RngStream::root(54).child("m");
  RngStream s4 = RngStream::root(54).child("m");
  const double simp2 =
      interference_at_tagged_fap(f.r, f.a, 0, p, InterferenceMode::simplified, s3);
  const double full2 =
      interference_at_tagged_fap(f.r, f.a, 0, p, InterferenceMode::full, s4);
  CHECK(simp2 == full2);
}

TEST_CASE("fading mean rescales interference exactly") {
  Fixture f;
  NetworkParams p1, p2;
  p2.sigma2 = 2.0;
  RngStream s1 = RngStream::root(55).child("s");
  RngStream s2 = RngStream::root(55).child("s");
  const double i1 =
      interference_at_tagged_fap(f.r, f.a, 0, p1, InterferenceMode::full, s1);
  const double i2 =
      interference_at_tagged_fap(f.r, f.a, 0, p2, InterferenceMode::full, s2);
  CHECK(i2 == doctest::Approx(2.0 * i1).epsilon(1e-12));
}

TEST_CASE("collision mode matches the deterministic mean") {
  Fixture f;
  NetworkParams p;
  p.n_h = 4.0;  // frequent hits keep the sample variance manageable
  RngStream s = RngStream::root(56).child("c");
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = interference_at_tagged_fap(f.r, f.a, 0, p,
                                                InterferenceMode::collision, s);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  // Bernoulli(1/n_h) at power/n_s averages to the deterministic 1/(n_s n_h)
  // model: one co-cell femto user, the ratio-5 macro user, the other FAP's
  // femto user.
  const Point at{800.0, 0.0};
  const Point q{-300.0, 412.0};
  const double w_fu =
      p.eta * std::pow(dist2(q, f.r.faps[1]) / dist2(q, at), 0.5 * p.alpha);
  const double expect =
      (p.eta + std::pow(5.0, 4.0) + w_fu) / p.spreading_gain() * p.sigma2;
  CHECK(std::fabs(mean - expect) < 3.0 * se);
}

TEST_CASE("collision mode replays and guards like the others") {
  Fixture f;
  NetworkParams p1, p2;
  p1.n_h = p2.n_h = 4.0;
  p2.sigma2 = 2.0;
  // The uniform hit draws ignore sigma2, so replaying the stream rescales
  // every contribution linearly.
  RngStream s1 = RngStream::root(57).child("r");
  RngStream s2 = RngStream::root(57).child("r");
  const double i1 = interference_at_tagged_fap(f.r, f.a, 0, p1,
                                               InterferenceMode::collision, s1);
  const double i2 = interference_at_tagged_fap(f.r, f.a, 0, p2,
                                               InterferenceMode::collision, s2);
  CHECK(i2 == doctest::Approx(2.0 * i1).epsilon(1e-12));

  RngStream s3 = RngStream::root(57).child("r");
  const double i3 = interference_at_tagged_fap(f.r, f.a, 0, p1,
                                               InterferenceMode::collision, s3);
  CHECK(i1 == i3);

  RngStream s4 = RngStream::root(57).child("mbs");
  RngStream s5 = RngStream::root(57).child("mbs");
  CHECK(interference_at_mbs(f.r, f.a, 1, p1, InterferenceMode::collision, s4) ==
        interference_at_mbs(f.r, f.a, 1, p1, InterferenceMode::collision, s5));

  f.r.fus_sampled = false;
  RngStream s6 = RngStream::root(57).child("g");
  CHECK_THROWS_AS(interference_at_tagged_fap(f.r, f.a, 0, p1,
                                             InterferenceMode::collision, s6),
                  std::logic_error);
  CHECK_THROWS_AS(
      interference_at_mbs(f.r, f.a, 1, p1, InterferenceMode::collision, s6),
      std::logic_error);
}

TEST_CASE("MBS observer counts peers and attached users") {
  Fixture f;
  NetworkParams p;
  RngStream s = RngStream::root(56).child("mbs");
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += interference_at_mbs(f.r, f.a, 1, p, InterferenceMode::simplified, s);
  // No other MBS-served user exists, so simplified mode hears nothing.
  CHECK(sum == 0.0);

  double sum_full = 0.0;
  RngStream sf = RngStream::root(56).child("mbsf");
  for (int i = 0; i < n; ++i)
    sum_full += interference_at_mbs(f.r, f.a, 1, p, InterferenceMode::full, sf);
  // Full mode hears the FAP-served macro user (power-controlled to the
  // tagged FAP 10 m away, 790 m from the MBS) and the other FAP's femto
  // user; the fixture leaves the tagged FAP's femto position list empty.
  const double w = std::pow(10.0 * 10.0 / (790.0 * 790.0), 0.5 * p.alpha);
  double mean = p.eta * w / p.spreading_gain();
  const Point& q = f.r.fus[1][0];
  const double wq = std::pow(dist2(q, f.r.faps[1]) / dist2(q, Point{}),
                             0.5 * p.alpha);
  mean += p.eta * wq / p.spreading_gain();
  CHECK(std::fabs(sum_full / n - mean) < 3.0 * mean / std::sqrt(n));
}

TEST_CASE("misassigned victims are rejected") {
  Fixture f;
  NetworkParams p;
  RngStream s = RngStream::root(57).child("t");
  CHECK_THROWS_AS(interference_at_tagged_fap(f.r, f.a, 1, p,
                                             InterferenceMode::simplified, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      interference_at_mbs(f.r, f.a, 0, p, InterferenceMode::simplified, s),
      std::invalid_argument);
  Realization untagged = f.r;
  untagged.tagged_fap = Realization::npos;
  CHECK_THROWS_AS(interference_at_tagged_fap(untagged, f.a, 0, p,
                                             InterferenceMode::simplified, s),
                  std::invalid_argument);
  Realization unfilled = f.r;
  unfilled.fus_sampled = false;
  CHECK_THROWS_AS(
      interference_at_tagged_fap(unfilled, f.a, 0, p, InterferenceMode::full, s),
      std::logic_error);
  CHECK_THROWS_AS(
      interference_at_mbs(unfilled, f.a, 1, p, InterferenceMode::full, s),
      std::logic_error);
}

TEST_CASE("sir_outage thresholds") {
  NetworkParams p;  // n_s = 32, theta = 2
  CHECK(!sir_outage(1.0, 1.0, 0.0, p));
  CHECK(sir_outage(1.0, 1.0, 1.0, p));        // 1/32 < 2
  CHECK(!sir_outage(1.0, 1.0, 1.0 / 65.0, p));  // 1/32 > 2/65
  NetworkParams z = p;
  z.theta = 0.0;
  CHECK(!sir_outage(1.0, 0.5, 100.0, z));
}

TEST_CASE("fixed deployment outage matches the product formula") {
  Fixture f;
  NetworkParams p;
  const double g = p.spreading_gain();
  std::vector<double> w;
  w.push_back(p.eta / g);                 // co-cell femto user
  w.push_back(std::pow(5.0, 4.0) / g);    // MBS-served macro user
  const Point& q = f.r.fus[1][0];
  w.push_back(p.eta / g *
              std::pow(dist2(q, f.r.faps[1]) / dist2(q, f.r.faps[0]),
                       0.5 * p.alpha));   // other FAP's femto user
  const double expect = oracle::product_outage(p.theta, p.eta / p.n_s, w);

  RngStream s = RngStream::root(58).child("out");
  const int n = 200000;
  int outages = 0;
  for (int i = 0; i < n; ++i) {
    const double intf =
        interference_at_tagged_fap(f.r, f.a, 0, p, InterferenceMode::full, s);
    const double fad = sample_fading(p, s);
    if (sir_outage(p.eta, fad, intf, p)) ++outages;
  }
  CHECK(oracle::binom_z(outages, n, expect) < 3.0);
}
