#pragma once
#include <optional>
#include <string>
#include <vector>

#include "bfp/interp.hpp"

namespace bfp {

enum class mobility_kind { bosonic, attenuated, tabulated };

// Nonlinear mobility h(s) together with the entropy functions derived from
// it:  phi_prime(s) = -int_s^inf dz/h(z),  phi(s) = int_0^s phi_prime.
//
// Kinds:
//   bosonic(gamma):        h(s) = s (1 + s^gamma), gamma >= 1
//   attenuated(gamma,eps): h(s) = s (1 + s^2 eta_eps(s)) with
//                          eta_eps(s) = eps^-beta eta(eps s), beta = gamma-2;
//                          eta(v) = v^beta for v <= 1, (3/2)^beta for v >= 2,
//                          and a fixed C^inf monotone bridge in between
//                          (exact formula in mobility.cpp). Coincides with
//                          the bosonic h on s <= 1/eps and never exceeds it.
//   tabulated(s[], h[]):   strictly increasing sample table; monotone cubic
//                          in log-log between samples, power-law tails for the
//                          entropy integrals, domain errors outside
//                          [s_front, s_back] for direct evaluation.
class Mobility {
public:
  static Mobility bosonic(double gamma);
  static Mobility attenuated(double gamma, double eps);
  static Mobility tabulated(std::vector<double> s, std::vector<double> h,
                            std::vector<double> s_cut = {});

  mobility_kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double eps() const { return eps_; }

  double operator()(double s) const; // h(s)
  double phi_prime(double s) const;  // strictly increasing, < 0
  double phi(double s) const;        // phi(0) = 0
  double phi_prime_inv(double v) const; // inverse of phi_prime, v < 0

  // Attenuation bridge profile eta(v) (exposed for tests).
  static double eta_bridge(double v, double beta);

private:
  Mobility() = default;

  double h_tab(double s) const;
  double phi_prime_tab(double s) const;

  mobility_kind kind_ = mobility_kind::bosonic;
  double gamma_ = 2.0;
  double eps_ = 0.0;

  // attenuated: cached piecewise constants
  double att_c_ = 0.0;        // cubic tail coefficient (3/(2 eps))^beta
  double att_pp_s1_ = 0.0;    // phi_prime at s1 = 1/eps
  double att_pp_s2_ = 0.0;    // phi_prime at s2 = 2/eps
  std::optional<Pchip> att_pp_; // phi_prime across the bridge [s1, s2]

  // tabulated
  std::optional<Pchip> tab_; // monotone cubic through (log s, log h)
  double tab_lo_ = 0.0, tab_hi_ = 0.0;
  std::vector<double> snode_; // sample abscissae (s, not log s)
  std::vector<double> cum_;   // cumulative int_front^snode 1/h
  std::vector<double> s_cut_;
  double tail_p_ = 0.0, tail_a_ = 0.0; // h ~ a s^p beyond the table
  double head_p_ = 0.0, head_a_ = 0.0; // h ~ a s^p below the table
  double pp_back_ = 0.0;               // phi_prime at s_back (tail integral)
};

// Load a tabulated mobility from CSV with header "s,h" (strictly increasing
// s column required).
Mobility load_mobility_csv(const std::string& path);

} // namespace bfp
