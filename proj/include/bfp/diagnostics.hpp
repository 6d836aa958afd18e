#pragma once
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "bfp/mobility.hpp"
#include "bfp/solver.hpp"
#include "bfp/transform.hpp"

namespace bfp {

// Least-squares power law log f = log c + e log|r| over the window
// [r_lo, r_hi], samples from both sides pooled. Meaningful only for
// snapshots whose density is unbounded at the origin; the caller gates on
// min_slope.
struct ProfileFit {
  bool applicable = false;
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  double residual = 0.0; // rms misfit of log f
  int samples = 0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double H = 0.0;
  double D_R = 0.0;
  // |H(t) - H(0) + int_0^t D_R| accumulated by trapezoid over records
  double entropy_identity_defect = 0.0;
  double x_p_lo = 0.0, x_p = 0.0, x_p_hi = 0.0;
  double E = 0.0;
  double min_slope = 0.0;
  double sup_f = 0.0;
  double flux_left = 0.0, flux_right = 0.0;
  double l2_sq = 0.0;
  // NaN when the fit does not apply (bounded density)
  double profile_exponent = std::numeric_limits<double>::quiet_NaN();
  double profile_prefactor = std::numeric_limits<double>::quiet_NaN();
};

// int (r^2/2 f + phi(f)) dr over the sampled grid; the origin atom carries
// no weight and no phi term.
double entropy(const DensityMeasure& d, const Mobility& mob);

// int (1/h(f)) (f' + r h(f))^2 dr; derivative stencils never cross r = 0.
double dissipation(const DensityMeasure& d, const Mobility& mob);

double kinetic_energy(const Profile& p); // (1/2) int u^2 dx
double l2_norm_sq(const Profile& p);     // int u^2 dx

// (f' + r h(f)) at the two domain ends, one-sided second-order stencils.
std::pair<double, double> boundary_flux_residual(const DensityMeasure& d,
                                                 const Mobility& mob);

// Negative window bounds pick the defaults: r_lo = twice the smallest panel
// width below 0.1 R, r_hi = 0.1 R.
ProfileFit profile_fit(const DensityMeasure& d, double gamma,
                       double r_lo = -1.0, double r_hi = -1.0);

// max over samples of f |r|^(2/gamma)
double profile_bound_constant(const DensityMeasure& d, double gamma);

// Time derivative of u at the nodes that produced d's samples, centered
// between the two bracketing snapshots; d must come from `mid`.
std::vector<double> tau_field(const Profile& before, const Profile& mid,
                              const Profile& after, const DensityMeasure& d);

// Closed-form density predictor on d's grid: with a(s) = -g (tau(s) + s) and
// q(r) = exp(int_0^r a), returns ((g/q) int_0^r s q ds)^(-1/g).
std::vector<double> profile_predictor(const DensityMeasure& d,
                                      const std::vector<double>& tau,
                                      double gamma);

// Pointwise defect of f'/f + r f^g + tau + r on d's grid.
std::vector<double> ode_flux_residual(const DensityMeasure& d,
                                      const std::vector<double>& tau,
                                      double gamma);

// Largest c such that the second difference of u carries the sign of u on
// every interior node with level < |u| < c; negative level picks the
// decomposition threshold.
double curvature_sign_band(const Profile& p, double level = -1.0);

// Virial test for forced condensation: margin = B m^(3g/2) / (2 E0)^((g-2)/2)
// - m; satisfied when positive, and then the kinetic energy would vanish by
// t = E0 / margin if the origin atom stayed empty.
struct CondensationCriterion {
  bool satisfied = false;
  double margin = 0.0;
  double blowup_time_bound = std::numeric_limits<double>::infinity();
};
CondensationCriterion condensation_criterion(double m, double E0, double gamma,
                                             double B_gamma);

// Partial-mass majorization of max(f0(r), f0(-r)) by the steady profile at
// the given theta; when it holds, the flow keeps min du/dx positive.
struct MajorizationReport {
  bool holds = false;
  double max_excess = 0.0;
  double r_at_max = 0.0;
};
MajorizationReport partial_mass_majorization(
    const std::function<double(double)>& f0, const Mobility& mob, double theta,
    double R, int samples = 2049);

// Densities of two runs from ordered data stay ordered; also tracks the
// crossing count of u_A - u_B per snapshot.
struct ComparisonReport {
  bool ordered = true;
  double max_violation = 0.0;
  double t_witness = 0.0, r_witness = 0.0;
  std::vector<int> crossings;
  bool crossings_nonincreasing = true;
};
ComparisonReport comparison_check(const Trajectory& a, const Trajectory& b,
                                  double tol);

// Crossing count of u_A - u_B on a fixed x-window is non-increasing in time,
// provided the difference keeps a stable sign (or stays zero) at the two
// window edges.
struct IntersectionReport {
  bool applicable = true;
  bool nonincreasing = true;
  std::vector<int> z;
  int witness_from = -1, witness_to = -1;
};
IntersectionReport intersection_check(const Trajectory& a, const Trajectory& b,
                                      double x_lo, double x_hi);

std::vector<DiagnosticsRecord> diagnose(const Trajectory& traj);

} // namespace bfp
