#pragma once
#include <functional>
#include <string>
#include <vector>

#include "bfp/mobility.hpp"
#include "bfp/transform.hpp"

namespace bfp {

enum class solver_mode { bounded, whole_line };

// Truncation ladder for whole-line runs: solve on [-R, R] for each R in
// `radii` and compare consecutive solutions on the first rung's window.
struct RLadder {
  std::vector<double> radii = {4.0, 6.0, 8.0};
  double tol = 1e-3;
};

struct SolverConfig {
  double gamma = 2.0;
  double R = 1.0;
  double m = 1.0;
  int N = 256;              // grid nodes including both ends, >= 16
  double sigma = -1.0;      // regularization; < 0 picks the default
  double dt = -1.0;         // initial step; <= 0 picks dx
  bool adaptive_dt = true;  // double on easy steps, halve on hard ones
  double t_end = 1.0;
  double snapshot_dt = 0.0; // emission cadence; 0 keeps first/last only
  double newton_tol = 1e-9;
  int newton_max_iter = 12;
  double barrier_tol = -1.0; // < 0 picks 0.02 R; 0 disables the check
  bool allow_zero_level_flat = false; // admit data flat exactly at u = 0
  solver_mode mode = solver_mode::bounded;
  RLadder r_ladder;
};

double grid_dx(const SolverConfig& cfg);
double default_sigma(const SolverConfig& cfg); // dx if gamma > 2, else 0

// F(z, alpha, p, q) = |p|^g a - |p|^(g-2) q + z (1 + |p|^g); polynomial in
// all arguments, no division, so p = 0 needs no special casing.
double residual_F(double z, double alpha, double p, double q, double gamma);
// same with the q-coefficient (|p| + sigma)^(g-2); equal to residual_F at
// sigma = 0 bit for bit
double residual_F_sigma(double z, double alpha, double p, double q,
                        double gamma, double sigma);

// Nodal residual of a profile at time-derivative `alpha` per node: centered
// interior stencils, second-order one-sided at the ends.
std::vector<double> residual_field(const Profile& p, double alpha,
                                   double sigma);

// In-place pool-adjacent-violators projection onto non-decreasing vectors
// (least squares, uniform weights); returns the number of nodes moved.
int pav_project(std::vector<double>& v);

// Static theta-equilibrium envelopes with a boundary atom plus translates of
// the datum moving at speed C; the solution stays between lower and upper.
struct BarrierPair {
  double theta = 0.0;
  double C = 0.0; // sup of the initial drift speed |d_t u| over |u0| > 0
  double K = 0.0; // time-Lipschitz constant sqrt(2) max{C, Lip}
  Profile static_lower, static_upper;
  Profile u0;
  double lower(double t, double x) const;
  double upper(double t, double x) const;
};

BarrierPair build_barriers(const Profile& u0, const Mobility& mob,
                           double theta_max = 50.0);

struct AdmissibilityReport {
  bool pass = true;
  std::vector<std::string> failures; // one line per failed clause + witness
  double min_slope = 0.0;      // discrete min du/dx off the zero-level flat
  double drift_constant = 0.0; // C(u0)
  double l2_sq = 0.0;          // int u0^2 dx (= second moment of f0)
  double theta_minorant = -1.0; // smallest ladder theta with f0 >= f_theta
  double tail_sup = 0.0;        // sup |r|^(1+eps0) f0 on the sampled range
  // corner compatibility: equation residual of the datum at the two ends
  // (reported, never enforced)
  double corner_lo = 0.0, corner_hi = 0.0;
};

AdmissibilityReport admissibility_check(const Profile& u0,
                                        const SolverConfig& cfg);

struct StepStats {
  double t = 0.0;
  double dt = 0.0;
  int newton_iters = 0;
  int projection_nodes = 0;
  double residual = 0.0; // max-norm after convergence
};

struct Trajectory {
  SolverConfig config;
  std::vector<Profile> snapshots;
  std::vector<StepStats> steps;
  long long total_projection_nodes = 0;
};

// One implicit Euler step by damped Newton on the nodal system; monotone
// projection and Dirichlet reassertion follow the solve. Barriers, when
// given, are asserted at the new time.
Profile time_step(const Profile& state, double t_new, double dt,
                  const SolverConfig& cfg, const BarrierPair* barriers,
                  StepStats* stats = nullptr);

Trajectory simulate(const SolverConfig& cfg, const Profile& u0);

// Whole-line datum: density and its cdf on R (cdf may be empty and is then
// tabulated from the density), total mass, and int r^2 f0 (< 0: computed).
struct WholeLineData {
  std::function<double(double)> density;
  std::function<double(double)> cdf;
  double mass = 0.0;
  double second_moment = -1.0;
  double eps0 = 1.0; // tail exponent for the sup |r|^(1+eps0) f0 check
};

WholeLineData gaussian_whole_line(double mass, double width);

AdmissibilityReport whole_line_admissibility(const WholeLineData& data,
                                             const SolverConfig& cfg);

struct WholeLineReport {
  std::vector<double> radii;
  std::vector<double> offsets; // cumulative mass below -R per rung
  std::vector<double> diffs;   // sup over the window, consecutive rungs
  bool converged = false;
  double window_lo = 0.0, window_hi = 0.0; // absolute mass coordinates
  std::vector<Trajectory> runs;
};

// Bounded solves on the truncation ladder; consecutive solutions compared
// in absolute mass coordinates on the first rung's window at shared
// snapshot indices.
WholeLineReport whole_line_simulate(const SolverConfig& cfg,
                                    const WholeLineData& data);

} // namespace bfp
