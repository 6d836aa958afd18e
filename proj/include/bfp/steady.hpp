#pragma once
#include <limits>
#include <vector>

#include "bfp/mobility.hpp"

namespace bfp {

// Dual-detector report for the finiteness of the limiting mass at theta = 0.
// `partials` are the tail-criterion partial integrals on a geometric ladder
// of upper limits; `mass_partials` are partial masses with a shrinking inner
// cutoff. `value` is +inf when finite == false.
struct CriticalMassReport {
  double R = 0;
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> partials;
  std::vector<double> mass_partials;
};

// f_theta(r) = (phi')^{-1}(-(r^2/2 + theta)); throws at r = 0, theta = 0.
double steady_density(const Mobility& mob, double theta, double r);

// m(R, theta) = int_{-R}^{R} f_theta; +inf when the theta = 0 integral
// diverges (only possible at theta = 0).
double steady_mass(const Mobility& mob, double R, double theta,
                   double* abs_err = nullptr);

// Smallest theta >= 0 with m(R, theta) <= m. Returns 0 when m >= m_c(R).
double theta_for_mass(const Mobility& mob, double R, double m,
                      double tol = 1e-10);

CriticalMassReport critical_mass(const Mobility& mob, double R);

// Inverse of the cumulative mass of f_theta on [-R, R]: precomputes a graded
// cumulative table once, then inverts with monotone interpolation plus a
// local Newton polish against the exact density.
class SteadyInverse {
public:
  SteadyInverse(const Mobility& mob, double R, double theta,
                int half_nodes = 8192);

  double mass() const { return 2.0 * half_[half_.size() - 1]; }
  double theta() const { return theta_; }
  double R() const { return R_; }
  // max slope of the inverse cdf = 1 / f(R)
  double lipschitz() const;

  // r with int_{-R}^{r} f = xi, for xi in [0, mass()]
  double inv_cdf(double xi) const;
  // int_{-R}^{r} f
  double cdf(double r) const;
  double density(double r) const;

private:
  double r_of_half(double q) const; // q in [0, mass()/2], r >= 0
  const Mobility* mob_;
  double R_ = 0, theta_ = 0;
  std::vector<double> rs_, half_; // r grid on [0, R], cumulative int_0^r f
};

// Equilibrium inverse-cdf profile with total mass m on a uniform x grid:
// subcritical mass picks theta(m); at or above the limiting mass the excess
// sits in a flat segment at level 0.
struct EquilibriumProfile {
  double theta = 0;
  double flat_mass = 0; // mass of the level-0 plateau (0 when subcritical)
  std::vector<double> x, u;
};
EquilibriumProfile equilibrium_profile(const Mobility& mob, double R, double m,
                                       int n_nodes);

} // namespace bfp
