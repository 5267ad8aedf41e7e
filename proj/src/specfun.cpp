#include "femtosim/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace femtosim {

namespace {

// Series expansion of P(s, x); converges fast for x < s + 1.
double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Continued fraction for Q(s, x) = 1 - P(s, x); stable for x >= s + 1.
// Modified Lentz iteration.
double gamma_q_contfrac(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double regularized_gamma_p(double s, double x) {
  if (!(s > 0.0)) throw std::invalid_argument("regularized_gamma_p: s must be > 0");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_contfrac(s, x);
}

double poisson_cdf(std::uint64_t k, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_cdf: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  return 1.0 - regularized_gamma_p(static_cast<double>(k) + 1.0, lambda);
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  constexpr double kPi = 3.14159265358979323846;
  QuadRule r;
  r.node.resize(n);
  r.weight.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    r.node[i] = -x;
    r.node[n - 1 - i] = x;
    r.weight[i] = r.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace femtosim
