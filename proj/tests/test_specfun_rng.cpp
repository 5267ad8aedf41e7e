#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "femtosim/rng.hpp"
#include "femtosim/specfun.hpp"
#include "oracles.hpp"

using namespace femtosim;

TEST_CASE("regularized gamma P against frozen values") {
  CHECK(regularized_gamma_p(3.0, 1.9635) ==
        doctest::Approx(0.313445214975937736).epsilon(1e-11));
  CHECK(regularized_gamma_p(0.5, 1.2) ==
        doctest::Approx(0.878664749641517853).epsilon(1e-11));
  CHECK(regularized_gamma_p(4.7, 3.1) ==
        doctest::Approx(0.246821609077614469).epsilon(1e-11));
}

TEST_CASE("regularized gamma P against quadrature of the density") {
  // Substituting t = v*v removes the endpoint singularity for s < 1.
  for (double s : {0.5, 1.7, 3.0, 10.0}) {
    for (double x : {0.3, 2.5, 9.0}) {
      const double ref = oracle::integrate(
          [s](double v) {
            return 2.0 * std::pow(v, 2.0 * s - 1.0) *
                   std::exp(-v * v - std::lgamma(s));
          },
          0.0, std::sqrt(x), 1e-12);
      CHECK(regularized_gamma_p(s, x) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("regularized gamma P edge behavior") {
  CHECK(regularized_gamma_p(2.5, 0.0) == 0.0);
  CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(regularized_gamma_p(1.0, -0.5), std::invalid_argument);
  for (double x : {0.1, 0.7, 2.0, 11.0})
    CHECK(regularized_gamma_p(1.0, x) ==
          doctest::Approx(-std::expm1(-x)).epsilon(1e-13));
  double prev = 0.0;
  for (double x = 0.0; x <= 8.0; x += 0.25) {
    const double v = regularized_gamma_p(3.0, x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("poisson cdf: frozen value, identity and direct summation") {
  const double nfu = 1.9634954084936208;
  CHECK(poisson_cdf(2, nfu) ==
        doctest::Approx(0.686556027390681174).epsilon(1e-11));
  CHECK(poisson_cdf(2, 1.9635) ==
        doctest::Approx(0.686554785024062264).epsilon(1e-11));

  for (std::uint64_t k = 0; k <= 100; k += 7) {
    for (double lam : {0.05, 0.5, nfu, 7.0, 23.0, 50.0}) {
      CHECK(poisson_cdf(k, lam) +
                regularized_gamma_p(static_cast<double>(k) + 1.0, lam) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  for (double lam : {0.3, 4.2, 17.0}) {
    long double pmf = std::exp(static_cast<long double>(-lam));
    long double cum = pmf;
    for (std::uint64_t k = 0; k <= 40; ++k) {
      CHECK(poisson_cdf(k, lam) ==
            doctest::Approx(static_cast<double>(cum)).epsilon(1e-12));
      pmf *= lam / static_cast<long double>(k + 1);
      cum += pmf;
    }
  }
  CHECK(poisson_cdf(5, 0.0) == 1.0);
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n : {8, 32, 64}) {
    const QuadRule g = gauss_legendre(n);
    REQUIRE(g.node.size() == static_cast<std::size_t>(n));
    double wsum = 0.0, x14 = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += g.weight[i];
      x14 += g.weight[i] * std::pow(g.node[i], 14);
      if (i > 0) CHECK(g.node[i] > g.node[i - 1]);
      CHECK(g.node[i] == doctest::Approx(-g.node[n - 1 - i]).epsilon(1e-13));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("rng streams are deterministic and label-separated") {
  RngStream a = RngStream::root(42).child("stream", 3);
  RngStream b = RngStream::root(42).child("stream", 3);
  for (int i = 0; i < 8; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c = RngStream::root(42).child("stream", 4);
  RngStream d = RngStream::root(42).child("other", 3);
  RngStream e = RngStream::root(43).child("stream", 3);
  std::vector<std::uint64_t> seen;
  for (RngStream* s : {&a, &c, &d, &e}) seen.push_back(s->next_u64());
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());

  // Nested children differ from their parent and from siblings.
  RngStream p = RngStream::root(7);
  RngStream q = p.child("x");
  RngStream r = q.child("x");
  CHECK(p.next_u64() != q.next_u64());
  CHECK(q.next_u64() != r.next_u64());
}

TEST_CASE("uniform01 range and moments") {
  RngStream s = RngStream::root(1).child("u");
  const int n = 100000;
  double sum = 0.0, mn = 1.0, mx = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01();
    sum += u;
    mn = std::min(mn, u);
    mx = std::max(mx, u);
  }
  CHECK(mn >= 0.0);
  CHECK(mx < 1.0);
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::fabs(sum / n - 0.5) < 3.0 * se);
}

TEST_CASE("bounded draws are uniform over the range") {
  RngStream s = RngStream::root(2).child("b");
  CHECK(s.bounded(1) == 0);
  const std::uint64_t n = 70000, m = 7;
  std::vector<std::uint64_t> counts(m, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t v = s.bounded(m);
    REQUIRE(v < m);
    ++counts[v];
  }
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / m;
  for (std::uint64_t c : counts) {
    const double dlt = static_cast<double>(c) - expect;
    chi2 += dlt * dlt / expect;
  }
  CHECK(oracle::chi2_sf(chi2, static_cast<int>(m) - 1) > 1e-4);
}

TEST_CASE("exponential sample mean") {
  RngStream s = RngStream::root(3).child("e");
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = s.exponential(3.0);
    REQUIRE(v >= 0.0);
    sum += v;
  }
  CHECK(std::fabs(sum / n - 3.0) < 3.0 * 3.0 / std::sqrt(n));
}

TEST_CASE("poisson sampler moments across the lambda range") {
  CHECK(RngStream::root(4).child("p").poisson(0.0) == 0);
  CHECK_THROWS_AS(RngStream::root(4).child("p").poisson(-1.0),
                  std::invalid_argument);
  for (double lam : {0.1, 1.0, 19.6349540849362, 250.0, 600.0}) {
    RngStream s = RngStream::root(4).child("p", static_cast<std::uint64_t>(lam * 10));
    const int n = lam > 100.0 ? 20000 : 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(s.poisson(lam));
    CHECK(std::fabs(sum / n - lam) < 3.0 * std::sqrt(lam / n));
  }
}

TEST_CASE("poisson sampler pmf at unit rate") {
  RngStream s = RngStream::root(5).child("pmf");
  const int n = 200000;
  std::vector<std::uint64_t> counts(9, 0);  // 0..7 and >= 8 pooled
  for (int i = 0; i < n; ++i)
    ++counts[std::min<std::uint64_t>(s.poisson(1.0), 8)];
  double chi2 = 0.0;
  double pmf = std::exp(-1.0), cum = 0.0;
  for (int k = 0; k < 9; ++k) {
    const double pk = k < 8 ? pmf : 1.0 - cum;
    cum += pmf;
    pmf /= static_cast<double>(k + 1);
    const double expect = pk * n;
    const double dlt = static_cast<double>(counts[k]) - expect;
    chi2 += dlt * dlt / expect;
  }
  CHECK(oracle::chi2_sf(chi2, 8) > 1e-4);
}
