// Special functions shared by the analytic bounds and the samplers.

#pragma once

#include <cstdint>
#include <vector>

namespace femtosim {

// Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0, to absolute
// error below 1e-12.  For integer s this equals Pr[Poisson(x) >= s].
double regularized_gamma_p(double s, double x);

// Pr[Poisson(lambda) <= k] = 1 - P(k + 1, lambda).
double poisson_cdf(std::uint64_t k, double lambda);

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
// Legendre recurrence.
struct QuadRule {
  std::vector<double> node;
  std::vector<double> weight;
};

QuadRule gauss_legendre(int n);

}  // namespace femtosim
