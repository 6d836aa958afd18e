#pragma once
#include <optional>
#include <vector>

namespace bfp {

// Monotone rearrangement state on the mass interval [0, m]: node x[i] carries
// the value u[i] in [-R, R], u non-decreasing, u(0) = -R, u(m) = +R.
struct Profile {
  double t = 0.0;
  double m = 0.0;
  double R = 0.0;
  double gamma = 2.0;
  std::vector<double> x;
  std::vector<double> u;
};

// Density-plus-condensate snapshot on [-R, R]: samples f >= 0 on a grid that
// skips a neighbourhood of r = 0, an atom of mass x_p at the origin whose
// cumulative coordinates are [x_minus, x_plus], and the grid-uncertainty
// bracket [x_p_lo, x_p_hi] around the reported x_p.
struct DensityMeasure {
  double t = 0.0;
  double m = 0.0;
  double R = 0.0;
  double gamma = 2.0;
  std::vector<double> r;
  std::vector<double> f;
  double x_p = 0.0;
  double x_p_lo = 0.0, x_p_hi = 0.0;
  double x_minus = 0.0, x_plus = 0.0;
  double level_tol = 0.0;   // |u| threshold used when this was decomposed
  double mass_defect = 0.0; // |x_p + int f - m| under the trapezoid rule
};

// Right-continuous non-decreasing cumulative table on [-R, R]: at node r[k]
// the left limit is lo[k] and the value is hi[k]; atoms have hi > lo.
struct CdfTable {
  double t = 0.0;
  double m = 0.0;
  double R = 0.0;
  double gamma = 2.0;
  std::vector<double> r, lo, hi;
};

// How decompose picks the |u| <= tol band that counts as the origin atom.
struct SlopeThresholdPolicy {
  double kappa = 2.0;     // cells of slack: tol = kappa * max dx * max du
  double eps_mult = 10.0; // absolute floor, in units of machine eps * R
  std::optional<double> level_override; // fixed threshold when set
};

void validate_profile(const Profile& p);

// Piecewise-linear evaluation of u at mass coordinate xq (clamped).
double profile_eval(const Profile& p, double xq);

double cdf_eval(const CdfTable& M, double r); // right-continuous value
double cdf_left_limit(const CdfTable& M, double r);

// Cumulative table of the measure f dr + x_p delta_0; the node at r = 0
// carries the jump [x_minus, x_plus]. M(R) lands on d.m by assigning the
// unsampled mass next to the origin to the two panels touching it.
CdfTable cdf_from_density(const DensityMeasure& d);

// u(x) = min { r : M(r) >= x }. Atoms become flat segments; requires M
// strictly increasing between atoms and M(R) = m.
Profile pseudo_inverse(const CdfTable& M, double m);

// M(r) = sup { x : u(x) <= r }. Flat segments of u become jumps.
CdfTable generalized_inverse(const Profile& p);

// Push the profile to the density side: f = 1 / (du/dx) on the image grid
// r = u(x) restricted to |u| > level_tol, with centered slopes inside and
// second-order one-sided slopes at the domain ends; the |u| <= level_tol
// band is reported as the origin atom with its uncertainty bracket.
DensityMeasure decompose(const Profile& p, const SlopeThresholdPolicy& pol = {});

// Sign alternations of w after dropping entries with |w| <= rel_tol * max|w|.
int sign_changes(const std::vector<double>& w, double rel_tol = 1e-10);

} // namespace bfp
