#include "femtosim/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "femtosim/specfun.hpp"

namespace femtosim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Index beyond which the Poisson(lambda) tail is far below 1e-13.
std::uint64_t poisson_trunc(double lambda) {
  return static_cast<std::uint64_t>(lambda + 40.0 * std::sqrt(lambda) + 40.0);
}

// Poisson pmf table p[k], k = 0..kmax.
std::vector<double> poisson_pmf_table(double lambda, std::uint64_t kmax) {
  std::vector<double> pmf(kmax + 1);
  pmf[0] = std::exp(-lambda);
  for (std::uint64_t k = 1; k <= kmax; ++k)
    pmf[k] = pmf[k - 1] * lambda / static_cast<double>(k);
  return pmf;
}

// expm1(x)/x, continuous through x = 0.
double expm1_over_x(double x) {
  if (x == 0.0) return 1.0;
  return std::expm1(x) / x;
}

// x / (1 - exp(-x)), continuous through x = 0.
double x_over_one_minus_exp(double x) {
  if (x == 0.0) return 1.0;
  return x / (-std::expm1(-x));
}

double clip01(double v) {
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

}  // namespace

double laplace_ns_exact(double s, double d, const NetworkParams& p,
                        bool given_service) {
  if (s < 0.0) throw std::invalid_argument("laplace_ns_exact: s must be >= 0");
  const double l1 = p.nbar_mu_d(d);
  const double l2 = p.nbar_fu();
  const std::uint64_t nc = p.n_c;
  const double es = std::exp(-s);  // exp(-inf) == 0 handles the s = inf case
  const std::uint64_t k1max = poisson_trunc(l1);
  const auto pmf1 = poisson_pmf_table(l1, k1max);

  // Transform of N_ns restricted to { N1 >= k1min } for a given macro cap c.
  const std::uint64_t k1min = given_service ? 1 : 0;
  auto inner = [&](std::uint64_t c) {
    double sum = 0.0;
    double att = 1.0;  // exp(-s * (k1 - c)+) while k1 <= c
    for (std::uint64_t k1 = k1min; k1 <= k1max; ++k1) {
      if (k1 > c) att *= es;
      sum += pmf1[k1] * att;
    }
    return sum;
  };

  const std::uint64_t k2cap = std::min<std::uint64_t>(nc, poisson_trunc(l2));
  const auto pmf2 = poisson_pmf_table(l2, k2cap == 0 ? 0 : k2cap - 1);

  double total = 0.0;
  for (std::uint64_t k2 = 0; k2 < k2cap; ++k2)
    total += pmf2[k2] * inner(nc - k2);

  if (given_service) {
    const double pe = -std::expm1(-l1) * poisson_cdf(nc - 1, l2);
    if (pe <= 0.0)
      throw std::domain_error("laplace_ns_exact: service event has zero mass");
    return total / pe;
  }
  // k2 >= nc: the cap is zero, so N_ns = N1 and the transform is its pgf.
  const double tail2 = regularized_gamma_p(static_cast<double>(nc), l2);
  total += tail2 * std::exp(l1 * (es - 1.0));
  return total;
}

double laplace_ns_upper(double s, double d, const NetworkParams& p) {
  if (s < 0.0) throw std::invalid_argument("laplace_ns_upper: s must be >= 0");
  const double l1 = p.nbar_mu_d(d);
  const double l2 = p.nbar_fu();
  const double tail2 = regularized_gamma_p(static_cast<double>(p.n_c), l2);
  return (1.0 - tail2) + std::exp(l1 * (std::exp(-s) - 1.0)) * tail2;
}

LaplaceBracket laplace_mbs_bracket(double s, const NetworkParams& p) {
  if (s < 0.0)
    throw std::invalid_argument("laplace_mbs_bracket: s must be >= 0");
  const double nm = p.nbar_mu();
  const double nf = p.nbar_fap();
  const double tail2 = regularized_gamma_p(static_cast<double>(p.n_c), p.nbar_fu());

  LaplaceBracket br;
  br.lb = std::exp((std::exp(-s) - 1.0) * nm);
  const double x = (std::exp(s) - 1.0) * p.gamma_area() * nm;
  if (x > 700.0) {
    br.ub = std::numeric_limits<double>::infinity();  // vacuous but valid
    return br;
  }
  const double beta = tail2 + (1.0 - tail2) * expm1_over_x(x);
  br.ub = br.lb * std::exp((beta - 1.0) * nf);
  return br;
}

BoundInputs BoundInputs::make(const NetworkParams& p, double d, int grid_t) {
  BoundInputs in;
  in.d = d;
  in.grid = PartitionGrid::geometric(p.kappa, grid_t);
  in.probs = partition_probs(d, in.grid, p.R, PartitionExclusion::tagged_coverage);
  return in;
}

double q1_mix(double theta, const NetworkParams& p, const BoundInputs& in) {
  const auto& k = in.grid.kappas;
  const int t = in.grid.t();
  const double c = theta / (p.n_h * p.eta);
  double q = in.probs.p0 / (1.0 + c * std::pow(k[0], p.alpha));
  for (int i = 1; i <= t; ++i) {
    q += in.probs.p_plus[i - 1] / (1.0 + c / std::pow(k[i - 1], p.alpha));
    q += in.probs.p_minus[i - 1] / (1.0 + c * std::pow(k[i], p.alpha));
  }
  return q;
}

double q2_mix(double theta, const NetworkParams& p, const BoundInputs& in) {
  const auto& k = in.grid.kappas;
  const int t = in.grid.t();
  const double c = theta / (p.n_h * p.eta);
  double q = in.probs.p0;
  for (int i = 1; i <= t; ++i) {
    q += in.probs.p_plus[i - 1] / (1.0 + c / std::pow(k[i], p.alpha));
    q += in.probs.p_minus[i - 1] / (1.0 + c * std::pow(k[i - 1], p.alpha));
  }
  return q;
}

double thm1_upper(double theta, double d, const NetworkParams& p,
                  const BoundInputs& in, PhiMode phi) {
  if (!(d > 0.0 && d < p.R))
    throw std::invalid_argument("thm1_upper: need 0 < d < R");
  const double a = 1.0 / (1.0 + theta / p.n_h);
  const double koa = std::pow(p.kappa_o, p.alpha);
  // kappa_o = 0 makes the not-served attenuation worst-case infinite: b = 0.
  const double b =
      koa > 0.0 ? 1.0 / (1.0 + theta / (p.eta * p.n_h * koa)) : (theta > 0.0 ? 0.0 : 1.0);
  const double core = std::exp(p.nbar_m_d(d) * (q1_mix(theta, p, in) - 1.0));

  if (phi == PhiMode::upper) {
    const double cocell =
        std::exp(static_cast<double>(p.n_c - 1) * std::log(a));
    const double s = b > 0.0 ? std::log(1.0 / b)
                             : std::numeric_limits<double>::infinity();
    return clip01(1.0 - cocell * core * laplace_ns_upper(s, d, p));
  }

  // Joint factor E[a^(N2 + min(N1, c) - 1) * b^(N1 - c)+ | E].
  const double l1 = p.nbar_mu_d(d);
  const double l2 = p.nbar_fu();
  const std::uint64_t nc = p.n_c;
  const std::uint64_t k1max = poisson_trunc(l1);
  const auto pmf1 = poisson_pmf_table(l1, k1max);
  const std::uint64_t k2cap = std::min<std::uint64_t>(nc, poisson_trunc(l2));
  const auto pmf2 = poisson_pmf_table(l2, k2cap == 0 ? 0 : k2cap - 1);

  double num = 0.0;
  double a_k2 = 1.0;
  for (std::uint64_t k2 = 0; k2 < k2cap; ++k2) {
    const std::uint64_t c = nc - k2;
    double inner = 0.0;
    double w = 1.0;  // a^(min(k1,c)-1) * b^(k1-c)+ tracked incrementally
    for (std::uint64_t k1 = 1; k1 <= k1max; ++k1) {
      if (k1 > 1) w *= (k1 <= c) ? a : b;
      inner += pmf1[k1] * w;
      if (w == 0.0) break;
    }
    num += pmf2[k2] * a_k2 * inner;
    a_k2 *= a;
  }
  const double pe = -std::expm1(-l1) * poisson_cdf(nc - 1, l2);
  if (pe <= 0.0) throw std::domain_error("thm1_upper: service event has zero mass");
  return clip01(1.0 - core * num / pe);
}

Gamma123 thm2_gammas(double theta, const NetworkParams& p,
                     const BoundInputs& in) {
  const double q2 = q2_mix(theta, p, in);
  const double ks = NetworkParams::ratio_scale(p.kappa);
  Gamma123 g;
  g.g1 = kPi * (1.0 - q2) * ks * ks * p.mu_m;
  g.g2 = theta / (p.eta * p.n_h * std::pow(1.0 + p.kappa, p.alpha));
  g.g3 = kPi * p.mu_m * p.gamma_area();
  return g;
}

Thm2Result thm2_lower(double theta, double d, const NetworkParams& p,
                      const BoundInputs& in, double gamma4, PhiMode phi) {
  if (!(d > 0.0 && d < p.R))
    throw std::invalid_argument("thm2_lower: need 0 < d < R");
  Thm2Result out;
  out.q2 = q2_mix(theta, p, in);
  const Gamma123 g = thm2_gammas(theta, p, in);
  const double nm = p.nbar_mu();
  const double nf = p.nbar_fap();
  const double tail2 = regularized_gamma_p(static_cast<double>(p.n_c), p.nbar_fu());

  const double x1 = g.g1 * p.R * p.R;
  const double ring = 1.0 / x_over_one_minus_exp(x1);  // (1 - e^-x1)/x1
  out.chi = ring * (1.0 - tail2) + gamma4 * tail2;

  const double s = std::log1p(theta / (p.eta * p.n_h * std::pow(p.kappa, p.alpha)));
  const double phi_ns = phi == PhiMode::exact
                            ? laplace_ns_exact(s, d, p, /*given_service=*/true)
                            : laplace_ns_upper(s, d, p);

  // FAP-interference factor (exp(nf(chi-1)) - exp(-nf)) / ((1-exp(-nf)) chi),
  // rewritten as exp(-nf) expm1(nf chi) / ((-expm1(-nf)) chi): stable for
  // nf -> 0 and evaluated in log space when nf*chi would overflow.
  const double nfchi = nf * out.chi;
  double log_mid;
  if (nf == 0.0) {
    log_mid = 0.0;
  } else if (nfchi > 500.0) {
    log_mid = -nf + nfchi - std::log(-std::expm1(-nf)) - std::log(out.chi);
  } else {
    log_mid = -nf + std::log(std::expm1(nfchi) / ((-std::expm1(-nf)) * out.chi));
  }
  out.lb = clip01(1.0 - std::exp(-nm * (1.0 - out.q2) + log_mid) * phi_ns);
  return out;
}

Thm3Result thm3_bounds(double theta, const NetworkParams& p) {
  Thm3Result out;
  const double nm = p.nbar_mu();
  const double nf = p.nbar_fap();
  const double ks = NetworkParams::ratio_scale(p.kappa);
  const double n_o = nm * ks * ks;
  out.eps = std::exp(-nm + nf * (expm1_over_x(n_o) - 1.0));

  const double s = std::log1p(theta / p.n_h);
  const LaplaceBracket br = laplace_mbs_bracket(s, p);
  const double inv_a = 1.0 + theta / p.n_h;
  out.lb_raw = 1.0 - inv_a * br.ub / (1.0 - out.eps);
  out.ub_raw = 1.0 - inv_a * (br.lb - out.eps);
  out.lb = clip01(out.lb_raw);
  out.ub = clip01(out.ub_raw);
  return out;
}

PdfBracket pdf_du_bounds(double d, const NetworkParams& p) {
  if (!(p.kappa <= 0.5))
    throw std::domain_error("pdf_du_bounds: requires kappa <= 1/2");
  if (!(d >= 0.0 && d <= p.R))
    throw std::invalid_argument("pdf_du_bounds: need 0 <= d <= R");
  const double nf = p.nbar_fap();
  const double k2 = p.kappa * p.kappa;
  const double base = 2.0 * d / (p.R * p.R);
  const double xl = (1.0 - 2.0 * p.kappa) * k2 * nf;
  const double xu = k2 * nf;

  PdfBracket out;
  out.lb = x_over_one_minus_exp(xl) *
           std::exp(-nf * d * d * k2 / (p.R * p.R)) * base;
  out.ub = x_over_one_minus_exp(xu) *
           std::exp(-nf * d * d * (1.0 - 2.0 * p.kappa) * k2 / (p.R * p.R)) * base;
  return out;
}

}  // namespace femtosim
