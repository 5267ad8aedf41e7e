// Network-wide parameters and the scalar quantities derived from them.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace femtosim {

// Two-tier uplink model inside one macrocell.  Densities are per square
// meter, distances in meters.  Power enters only through the femto/macro
// ratio eta, so macro transmit power is fixed at 1 internally.
struct NetworkParams {
  double R = 1000.0;        // macrocell radius
  double lambda_f = 5e-6;   // FAP density
  double mu_f = 5e-3;       // femto-user density on each FAP's ring
  double mu_m = 40e-6;      // macro-user density
  double r_f = 10.0;        // inner radius of the femto-user ring
  double delta = 5.0;       // width of the femto-user ring
  double alpha = 4.0;       // path-loss exponent
  double kappa = 0.08;      // handover (coverage) ratio
  double kappa_o = 0.008;   // minimum access ratio (no-go floor)
  std::uint64_t n_c = 3;    // backhaul capacity per FAP (users)
  double n_s = 32.0;        // subbands per macrocell band
  double n_h = 1024.0;      // subchannels per subband
  double eta = 40.0;        // femto-to-macro power ratio p_f / p_m
  double theta = 2.0;       // SIR threshold
  double sigma2 = 1.0;      // mean of the exponential fading power

  void validate() const {
    if (!(R > 0.0)) throw std::invalid_argument("params: R must be > 0");
    if (lambda_f < 0.0 || mu_f < 0.0 || mu_m < 0.0)
      throw std::invalid_argument("params: densities must be >= 0");
    if (!(r_f >= 0.0 && delta >= 0.0))
      throw std::invalid_argument("params: ring geometry must be >= 0");
    if (!(alpha > 2.0)) throw std::invalid_argument("params: alpha must be > 2");
    if (!(kappa > 0.0 && kappa < 1.0))
      throw std::invalid_argument("params: kappa must lie in (0, 1)");
    if (!(kappa_o >= 0.0 && kappa_o < kappa))
      throw std::invalid_argument("params: need 0 <= kappa_o < kappa");
    if (n_c < 1) throw std::invalid_argument("params: n_c must be >= 1");
    if (!(n_s >= 1.0 && n_h >= 1.0))
      throw std::invalid_argument("params: n_s and n_h must be >= 1");
    if (!(eta > 0.0)) throw std::invalid_argument("params: eta must be > 0");
    if (theta < 0.0) throw std::invalid_argument("params: theta must be >= 0");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("params: sigma2 must be > 0");
  }

  static constexpr double pi() { return 3.14159265358979323846; }

  // x / (1 - x^2): maps a distance ratio to the Apollonius radius per unit
  // FAP distance.
  static double ratio_scale(double x) { return x / (1.0 - x * x); }

  double nbar_mu() const { return pi() * R * R * mu_m; }
  double nbar_fap() const { return pi() * R * R * lambda_f; }
  double nbar_fu() const {
    return pi() * ((r_f + delta) * (r_f + delta) - r_f * r_f) * mu_f;
  }

  // (kappa/(1-kappa^2))^2 - (kappa_o/(1-kappa_o^2))^2: per-d^2 area factor
  // of the coverage disk minus the no-go disk.
  double gamma_area() const {
    const double a = ratio_scale(kappa);
    const double b = ratio_scale(kappa_o);
    return a * a - b * b;
  }

  // Mean macro users inside the tagged FAP's admissible coverage region.
  double nbar_mu_d(double d) const { return pi() * mu_m * gamma_area() * d * d; }

  // Mean macro users outside the tagged coverage disk.
  double nbar_m_d(double d) const {
    const double a = ratio_scale(kappa);
    return pi() * (R * R - a * a * d * d) * mu_m;
  }

  double spreading_gain() const { return n_s * n_h; }
};

}  // namespace femtosim
