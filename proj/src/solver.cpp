#include "bfp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "bfp/errors.hpp"
#include "bfp/interp.hpp"
#include "bfp/quad.hpp"
#include "bfp/steady.hpp"

namespace bfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string witness(const char* what, double where, double value) {
  std::ostringstream os;
  os << what << " at " << where << " (value " << value << ")";
  return os.str();
}

double level_tol_of(const Profile& p) {
  double max_dx = 0, max_du = 0;
  for (size_t i = 0; i + 1 < p.x.size(); ++i) {
    max_dx = std::max(max_dx, p.x[i + 1] - p.x[i]);
    max_du = std::max(max_du, p.u[i + 1] - p.u[i]);
  }
  SlopeThresholdPolicy pol;
  double tol = std::max(pol.eps_mult * std::numeric_limits<double>::epsilon() *
                            p.R,
                        pol.kappa * max_dx * max_du);
  return std::min(tol, 0.5 * p.R);
}

// drift speed |d_t u| of the equation at a node, from slope p and curvature
// q: d_t u = q p^-2 - z (p^-gamma + 1)
double drift_speed(double z, double p, double q, double gamma) {
  if (!(p > 0)) return kInf;
  return std::fabs(q / (p * p) - z * (std::pow(p, -gamma) + 1.0));
}

struct Stencil {
  std::vector<double> p, q; // slope and curvature per node
};

// centered interior, second-order one-sided at the ends (uniform grid)
Stencil stencil_of(const std::vector<double>& x, const std::vector<double>& u) {
  const size_t n = x.size();
  Stencil s;
  s.p.assign(n, 0.0);
  s.q.assign(n, 0.0);
  if (n < 2) return s;
  const double dx = (x[n - 1] - x[0]) / double(n - 1);
  for (size_t i = 1; i + 1 < n; ++i) {
    s.p[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    s.q[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
  }
  if (n >= 4) {
    s.p[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx);
    s.p[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dx);
    s.q[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (dx * dx);
    s.q[n - 1] =
        (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) /
        (dx * dx);
  } else {
    s.p[0] = (u[1] - u[0]) / dx;
    s.p[n - 1] = (u[n - 1] - u[n - 2]) / dx;
  }
  return s;
}

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                  std::vector<double>& sup, std::vector<double>& rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

struct NewtonResult {
  bool converged = false;
  int iters = 0;
  double residual = kInf;
};

// implicit Euler system F_sigma(u_i, (u_i - un_i)/dt, p_i, q_i) = 0 on the
// interior, Dirichlet ends fixed
NewtonResult newton_solve(std::vector<double>& u,
                          const std::vector<double>& un, double dx, double dt,
                          double gamma, double sigma, double tol,
                          int max_iter) {
  const size_t n = u.size(), ni = n - 2;
  std::vector<double> res(ni), sub(ni), diag(ni), sup(ni), delta(ni),
      trial(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  auto fill_residual = [&](const std::vector<double>& v, std::vector<double>& r,
                           double& maxr, double& norm2) {
    maxr = 0;
    norm2 = 0;
    for (size_t i = 1; i + 1 < n; ++i) {
      double p = (v[i + 1] - v[i - 1]) / (2.0 * dx);
      double q = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx);
      double al = (v[i] - un[i]) / dt;
      double f = residual_F_sigma(v[i], al, p, q, gamma, sigma);
      r[i - 1] = f;
      maxr = std::max(maxr, std::fabs(f));
      norm2 += f * f;
    }
  };

  // The evaluation of F at stiff nodes is a cancellation of terms whose
  // magnitude can dwarf tol; one ulp of u then moves F by about
  // eps * (term sizes). Convergence below that floor is unattainable, so
  // each node gets the larger of tol and its own roundoff allowance.
  auto within_floor = [&](const std::vector<double>& v,
                          const std::vector<double>& r) {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (std::fabs(r[i - 1]) <= tol) continue;
      double p = (v[i + 1] - v[i - 1]) / (2.0 * dx);
      double ap = std::fabs(p);
      double A = std::pow(ap, gamma);
      double B = std::pow(ap + sigma, gamma - 2.0);
      double um = std::max({std::fabs(v[i - 1]), std::fabs(v[i]),
                            std::fabs(v[i + 1]), std::fabs(un[i])});
      double scale = A * (std::fabs(v[i]) + std::fabs(un[i])) / dt +
                     4.0 * B * um / (dx * dx) + (1.0 + A) * std::fabs(v[i]);
      if (std::fabs(r[i - 1]) > 32.0 * eps * scale) return false;
    }
    return true;
  };

  NewtonResult out;
  double maxr = 0, norm2 = 0;
  fill_residual(u, res, maxr, norm2);
  for (int it = 0; it < max_iter; ++it) {
    if (maxr <= tol || within_floor(u, res)) {
      out.converged = true;
      out.iters = it;
      out.residual = maxr;
      return out;
    }
    for (size_t i = 1; i + 1 < n; ++i) {
      double p = (u[i + 1] - u[i - 1]) / (2.0 * dx);
      double q = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
      double al = (u[i] - un[i]) / dt;
      double ap = std::fabs(p);
      double sg = (p > 0) - (p < 0);
      double A = std::pow(ap, gamma);
      double B = std::pow(ap + sigma, gamma - 2.0);
      double dBdp = 0.0;
      if (gamma != 2.0 && ap + sigma > 0.0)
        dBdp = (gamma - 2.0) * std::pow(ap + sigma, gamma - 3.0) * sg;
      double dFdp =
          gamma * std::pow(ap, gamma - 1.0) * sg * (al + u[i]) - dBdp * q;
      diag[i - 1] = A / dt + (1.0 + A) + 2.0 * B / (dx * dx);
      sub[i - 1] = -dFdp / (2.0 * dx) - B / (dx * dx);
      sup[i - 1] = dFdp / (2.0 * dx) - B / (dx * dx);
      delta[i - 1] = -res[i - 1];
    }
    thomas_solve(sub, diag, sup, delta);

    double lam = 1.0;
    bool accepted = false;
    trial = u;
    for (int back = 0; back < 30; ++back) {
      for (size_t i = 1; i + 1 < n; ++i) trial[i] = u[i] + lam * delta[i - 1];
      double tmax = 0, tnorm = 0;
      std::vector<double>& tres = res; // reuse res: overwritten on accept too
      fill_residual(trial, tres, tmax, tnorm);
      if (tnorm <= (1.0 - 1e-4 * lam) * norm2 || tmax <= tol) {
        u = trial;
        maxr = tmax;
        norm2 = tnorm;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) {
      fill_residual(u, res, maxr, norm2);
      out.converged = within_floor(u, res);
      out.iters = it + 1;
      out.residual = maxr;
      return out;
    }
  }
  out.converged = maxr <= tol || within_floor(u, res);
  out.iters = max_iter;
  out.residual = maxr;
  return out;
}

struct StepOutcome {
  Profile prof;
  StepStats stats;
  bool converged = false;
};

StepOutcome step_once(const Profile& state, double t_new, double dt,
                      const SolverConfig& cfg, double sigma,
                      const BarrierPair* barriers) {
  const size_t n = state.u.size();
  const double dx = (state.x[n - 1] - state.x[0]) / double(n - 1);

  StepOutcome out;
  std::vector<double> u = state.u;
  NewtonResult nr = newton_solve(u, state.u, dx, dt, cfg.gamma, sigma,
                                 cfg.newton_tol, cfg.newton_max_iter);
  out.stats.t = t_new;
  out.stats.dt = dt;
  out.stats.newton_iters = nr.iters;
  out.stats.residual = nr.residual;
  if (!nr.converged) return out;

  out.stats.projection_nodes = pav_project(u);
  u[0] = -state.R;
  u[n - 1] = state.R;

  if (barriers && cfg.barrier_tol != 0.0) {
    double tol_b = cfg.barrier_tol < 0 ? 0.02 * state.R : cfg.barrier_tol;
    for (size_t i = 0; i < n; ++i) {
      double lo = barriers->lower(t_new, state.x[i]);
      double hi = barriers->upper(t_new, state.x[i]);
      if (u[i] < lo - tol_b || u[i] > hi + tol_b) {
        std::ostringstream os;
        os << "barrier violated at t = " << t_new << ", x = " << state.x[i]
           << ": u = " << u[i] << " outside [" << lo << ", " << hi
           << "] + tol " << tol_b;
        throw numerical_error(os.str());
      }
    }
  }

  out.prof = state;
  out.prof.t = t_new;
  out.prof.u = std::move(u);
  out.converged = true;
  return out;
}

void check_config(const SolverConfig& cfg) {
  if (!(cfg.gamma >= 2.0)) throw config_error("solver: gamma must be >= 2");
  if (!(cfg.R > 0) || !(cfg.m > 0))
    throw config_error("solver: R and m must be positive");
  if (cfg.N < 16) throw config_error("solver: N must be at least 16");
  if (!(cfg.t_end > 0)) throw config_error("solver: t_end must be positive");
  if (!(cfg.snapshot_dt >= 0))
    throw config_error("solver: snapshot_dt must be >= 0");
  if (!(cfg.newton_tol > 0))
    throw config_error("solver: newton_tol must be positive");
  if (cfg.newton_max_iter < 2)
    throw config_error("solver: newton_max_iter must be at least 2");
  if (std::isnan(cfg.sigma)) throw config_error("solver: sigma is NaN");
}

Profile resample_to_grid(const Profile& u0, const SolverConfig& cfg) {
  const int n = cfg.N;
  const double dx = cfg.m / double(n - 1);
  Profile out;
  out.t = u0.t;
  out.m = cfg.m;
  out.R = cfg.R;
  out.gamma = cfg.gamma;
  out.x.resize(n);
  for (int i = 0; i < n; ++i) out.x[i] = double(i) * dx;
  out.x[n - 1] = cfg.m;

  bool same = int(u0.x.size()) == n;
  if (same) {
    for (int i = 0; i < n && same; ++i)
      same = std::fabs(u0.x[i] - out.x[i]) <= 1e-12 * std::max(1.0, cfg.m);
  }
  if (same) {
    out.u = u0.u;
  } else {
    out.u.resize(n);
    for (int i = 0; i < n; ++i) out.u[i] = profile_eval(u0, out.x[i]);
  }
  out.u[0] = -cfg.R;
  out.u[n - 1] = cfg.R;
  return out;
}

std::function<double(double)> tabulate_cdf(
    const std::function<double(double)>& density, double B) {
  const int n = 4097;
  auto xs = std::make_shared<std::vector<double>>(n);
  auto cs = std::make_shared<std::vector<double>>(n);
  double acc = 0.0;
  (*xs)[0] = -B;
  (*cs)[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    double a = -B + 2.0 * B * double(i - 1) / double(n - 1);
    double b = -B + 2.0 * B * double(i) / double(n - 1);
    acc += gl5(density, a, b);
    (*xs)[i] = b;
    (*cs)[i] = acc;
  }
  return [xs, cs](double r) {
    if (r <= (*xs)[0]) return 0.0;
    if (r >= xs->back()) return cs->back();
    return lerp_eval(*xs, *cs, r);
  };
}

} // namespace

double grid_dx(const SolverConfig& cfg) { return cfg.m / double(cfg.N - 1); }

double default_sigma(const SolverConfig& cfg) {
  return cfg.gamma > 2.0 ? grid_dx(cfg) : 0.0;
}

double residual_F_sigma(double z, double alpha, double p, double q,
                        double gamma, double sigma) {
  double ap = std::fabs(p);
  double A = std::pow(ap, gamma);
  double B = std::pow(ap + sigma, gamma - 2.0);
  return A * alpha - B * q + z * (1.0 + A);
}

double residual_F(double z, double alpha, double p, double q, double gamma) {
  return residual_F_sigma(z, alpha, p, q, gamma, 0.0);
}

std::vector<double> residual_field(const Profile& p, double alpha,
                                   double sigma) {
  Stencil s = stencil_of(p.x, p.u);
  std::vector<double> out(p.u.size());
  for (size_t i = 0; i < p.u.size(); ++i)
    out[i] = residual_F_sigma(p.u[i], alpha, s.p[i], s.q[i], p.gamma, sigma);
  return out;
}

int pav_project(std::vector<double>& v) {
  const size_t n = v.size();
  if (n < 2) return 0;
  std::vector<double> sum(n);
  std::vector<size_t> cnt(n);
  size_t top = 0;
  for (size_t i = 0; i < n; ++i) {
    sum[top] = v[i];
    cnt[top] = 1;
    ++top;
    while (top >= 2 &&
           sum[top - 1] * double(cnt[top - 2]) <
               sum[top - 2] * double(cnt[top - 1])) {
      sum[top - 2] += sum[top - 1];
      cnt[top - 2] += cnt[top - 1];
      --top;
    }
  }
  int moved = 0;
  size_t i = 0;
  for (size_t b = 0; b < top; ++b) {
    double mean = sum[b] / double(cnt[b]);
    for (size_t k = 0; k < cnt[b]; ++k, ++i) {
      if (v[i] != mean) ++moved;
      v[i] = mean;
    }
  }
  return moved;
}

double BarrierPair::lower(double t, double x) const {
  return std::max(profile_eval(static_lower, x), profile_eval(u0, x) - C * t);
}

double BarrierPair::upper(double t, double x) const {
  return std::min(profile_eval(static_upper, x), profile_eval(u0, x) + C * t);
}

BarrierPair build_barriers(const Profile& u0, const Mobility& mob,
                           double theta_max) {
  validate_profile(u0);
  const double R = u0.R, m = u0.m, gamma = u0.gamma;
  const size_t n = u0.x.size();

  double level = level_tol_of(u0);
  Stencil st = stencil_of(u0.x, u0.u);
  double C = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (std::fabs(u0.u[i]) <= level) continue;
    C = std::max(C, drift_speed(u0.u[i], st.p[i], st.q[i], gamma));
  }
  if (!std::isfinite(C))
    throw numerical_error(
        "barrier construction: initial drift speed is not finite");

  double theta0 = std::max(theta_for_mass(mob, R, m), 1e-3);
  const double slack = 1e-10 * R;
  for (double theta = theta0; theta <= theta_max; theta *= 1.5) {
    SteadyInverse si(mob, R, theta, 4096);
    double m_theta = std::min(si.mass(), m);
    Profile lo, hi;
    lo.t = hi.t = 0;
    lo.m = hi.m = m;
    lo.R = hi.R = R;
    lo.gamma = hi.gamma = gamma;
    lo.x = hi.x = u0.x;
    lo.u.resize(n);
    hi.u.resize(n);
    for (size_t i = 0; i < n; ++i) {
      double x = u0.x[i];
      lo.u[i] = x <= m - m_theta ? -R : si.inv_cdf(x - (m - m_theta));
      hi.u[i] = x >= m_theta ? R : si.inv_cdf(x);
    }
    lo.u[0] = -R;
    lo.u[n - 1] = R;
    hi.u[0] = -R;
    hi.u[n - 1] = R;

    bool sandwich = true;
    for (size_t i = 0; i < n && sandwich; ++i)
      sandwich = lo.u[i] <= u0.u[i] + slack && u0.u[i] <= hi.u[i] + slack;
    if (!sandwich) continue;

    BarrierPair bp;
    bp.theta = theta;
    bp.C = C;
    bp.K = std::sqrt(2.0) * std::max(C, si.lipschitz());
    bp.static_lower = std::move(lo);
    bp.static_upper = std::move(hi);
    bp.u0 = u0;
    return bp;
  }
  std::ostringstream os;
  os << "barrier construction failed: no envelope level up to " << theta_max
     << " encloses the datum";
  throw numerical_error(os.str());
}

AdmissibilityReport admissibility_check(const Profile& u0,
                                        const SolverConfig& cfg) {
  AdmissibilityReport rep;
  try {
    validate_profile(u0);
  } catch (const config_error& e) {
    rep.pass = false;
    rep.failures.push_back(std::string("profile: ") + e.what());
    return rep;
  }
  const size_t n = u0.x.size();
  const double R = u0.R;

  double tol0 = 1e-9 * std::max(1.0, R);
  if (std::fabs(u0.u.front() + R) > tol0)
    rep.failures.push_back(witness("left end away from -R", u0.x.front(),
                                   u0.u.front()));
  if (std::fabs(u0.u.back() - R) > tol0)
    rep.failures.push_back(witness("right end away from +R", u0.x.back(),
                                   u0.u.back()));

  double level = cfg.allow_zero_level_flat ? level_tol_of(u0) : -1.0;
  rep.min_slope = kInf;
  double worst_x = 0;
  for (size_t i = 0; i + 1 < n; ++i) {
    if (std::max(std::fabs(u0.u[i]), std::fabs(u0.u[i + 1])) <= level)
      continue;
    double s = (u0.u[i + 1] - u0.u[i]) / (u0.x[i + 1] - u0.x[i]);
    if (s < rep.min_slope) {
      rep.min_slope = s;
      worst_x = 0.5 * (u0.x[i] + u0.x[i + 1]);
    }
  }
  if (!(rep.min_slope > 0))
    rep.failures.push_back(
        witness("non-positive slope outside the zero level", worst_x,
                rep.min_slope));

  Stencil st = stencil_of(u0.x, u0.u);
  double lev = level_tol_of(u0);
  rep.drift_constant = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (std::fabs(u0.u[i]) <= lev) continue;
    double c = drift_speed(u0.u[i], st.p[i], st.q[i], u0.gamma);
    if (!std::isfinite(c)) {
      rep.failures.push_back(
          witness("drift speed not finite", u0.x[i], u0.u[i]));
      rep.drift_constant = kInf;
      break;
    }
    rep.drift_constant = std::max(rep.drift_constant, c);
  }

  rep.l2_sq = 0.0;
  for (size_t i = 0; i + 1 < n; ++i)
    rep.l2_sq += 0.5 * (u0.u[i] * u0.u[i] + u0.u[i + 1] * u0.u[i + 1]) *
                 (u0.x[i + 1] - u0.x[i]);

  std::vector<double> rf = residual_field(u0, 0.0, std::max(cfg.sigma, 0.0));
  rep.corner_lo = rf.front();
  rep.corner_hi = rf.back();

  rep.pass = rep.failures.empty();
  return rep;
}

Profile time_step(const Profile& state, double t_new, double dt,
                  const SolverConfig& cfg, const BarrierPair* barriers,
                  StepStats* stats) {
  if (!(dt > 0)) throw config_error("time_step: dt must be positive");
  double sigma = cfg.sigma >= 0 ? cfg.sigma : default_sigma(cfg);
  StepOutcome out = step_once(state, t_new, dt, cfg, sigma, barriers);
  if (stats) *stats = out.stats;
  if (!out.converged) {
    std::ostringstream os;
    os << "Newton did not converge in " << cfg.newton_max_iter
       << " iterations (residual " << out.stats.residual << ", dt " << dt
       << ")";
    throw numerical_error(os.str());
  }
  return out.prof;
}

Trajectory simulate(const SolverConfig& cfg, const Profile& u0) {
  check_config(cfg);
  validate_profile(u0);
  if (std::fabs(u0.m - cfg.m) > 1e-9 * std::max(1.0, cfg.m))
    throw config_error("simulate: datum mass differs from config mass");
  if (std::fabs(u0.R - cfg.R) > 1e-9 * std::max(1.0, cfg.R))
    throw config_error("simulate: datum radius differs from config radius");
  if (u0.gamma != cfg.gamma)
    throw config_error("simulate: datum gamma differs from config gamma");

  Profile state = resample_to_grid(u0, cfg);
  state.t = 0.0;

  AdmissibilityReport adm = admissibility_check(state, cfg);
  if (!adm.pass) {
    std::ostringstream os;
    os << "simulate: datum not admissible:";
    for (const auto& f : adm.failures) os << " [" << f << "]";
    throw config_error(os.str());
  }

  Mobility mob = Mobility::bosonic(cfg.gamma);
  BarrierPair barriers = build_barriers(state, mob);

  const double dx = grid_dx(cfg);
  const double sigma = cfg.sigma >= 0 ? cfg.sigma : default_sigma(cfg);
  const double dt0 = cfg.dt > 0 ? cfg.dt : dx;
  const double dt_min = dt0 * std::pow(2.0, -25);
  const double dt_max = 64.0 * dt0;
  double dt = dt0;

  Trajectory traj;
  traj.config = cfg;
  traj.snapshots.push_back(state);

  const double sd = cfg.snapshot_dt;
  int snap_k = 1;
  double next_snap =
      sd > 0 ? std::min(sd, cfg.t_end) : cfg.t_end;
  double t = 0.0;

  while (t < cfg.t_end * (1.0 - 1e-12)) {
    double dt_try = std::min(dt, next_snap - t);
    bool clipped = false;
    if (next_snap - t <= dt * (1.0 + 1e-9)) {
      dt_try = next_snap - t;
      clipped = true;
    }

    StepOutcome out;
    int halvings = 0;
    for (;;) {
      double t_new = clipped ? next_snap : t + dt_try;
      out = step_once(state, t_new, dt_try, cfg, sigma, &barriers);
      if (out.converged) break;
      dt_try *= 0.5;
      clipped = false;
      if (++halvings > 20 || dt_try < dt_min) {
        std::ostringstream os;
        os << "simulate: time step collapsed at t = " << t
           << " (Newton residual " << out.stats.residual << " after "
           << halvings << " halvings)";
        throw numerical_error(os.str());
      }
    }

    state = std::move(out.prof);
    t = state.t;
    traj.steps.push_back(out.stats);
    traj.total_projection_nodes += out.stats.projection_nodes;

    if (t == next_snap) {
      traj.snapshots.push_back(state);
      ++snap_k;
      if (sd > 0) {
        next_snap = std::min(double(snap_k) * sd, cfg.t_end);
        while (next_snap <= t && next_snap < cfg.t_end) {
          ++snap_k;
          next_snap = std::min(double(snap_k) * sd, cfg.t_end);
        }
      } else {
        next_snap = cfg.t_end;
      }
      if (next_snap <= t) break;
    }

    if (cfg.adaptive_dt) {
      double base = clipped ? dt : dt_try;
      if (out.stats.newton_iters <= 3)
        dt = std::min(base * 2.0, dt_max);
      else if (out.stats.newton_iters >= cfg.newton_max_iter - 1)
        dt = std::max(base * 0.5, dt_min);
      else
        dt = base;
    }
  }
  return traj;
}

WholeLineData gaussian_whole_line(double mass, double width) {
  WholeLineData d;
  const double w = width;
  d.density = [mass, w](double r) {
    return mass / (w * std::sqrt(2.0 * M_PI)) *
           std::exp(-r * r / (2.0 * w * w));
  };
  d.cdf = [mass, w](double r) {
    return mass * 0.5 * std::erfc(-r / (w * std::sqrt(2.0)));
  };
  d.mass = mass;
  d.second_moment = mass * w * w;
  return d;
}

AdmissibilityReport whole_line_admissibility(const WholeLineData& data,
                                             const SolverConfig& cfg) {
  AdmissibilityReport rep;
  if (!data.density) {
    rep.pass = false;
    rep.failures.push_back("whole line: no density given");
    return rep;
  }
  double Rmax = cfg.r_ladder.radii.empty() ? cfg.R
                                           : cfg.r_ladder.radii.back();
  const double B = Rmax + 4.0;
  const int ns = 801;

  for (int i = 0; i < ns; ++i) {
    double r = -B + 2.0 * B * double(i) / double(ns - 1);
    double f = data.density(r);
    if (!(f >= 0) || !std::isfinite(f)) {
      rep.failures.push_back(witness("density negative or not finite", r, f));
      break;
    }
  }
  if (!(data.mass > 0))
    rep.failures.push_back(witness("mass not positive", 0.0, data.mass));

  Mobility mob = Mobility::bosonic(cfg.gamma);
  rep.theta_minorant = -1.0;
  for (double theta = 0.125; theta <= 64.0; theta *= 2.0) {
    bool ok = true;
    for (int i = 0; i < ns && ok; ++i) {
      double r = -B + 2.0 * B * double(i) / double(ns - 1);
      double f_eq = steady_density(mob, theta, r);
      ok = data.density(r) >= f_eq * (1.0 - 1e-9);
    }
    if (ok) {
      rep.theta_minorant = theta;
      break;
    }
  }
  if (rep.theta_minorant < 0)
    rep.failures.push_back(
        "no equilibrium minorant found below theta = 64");

  if (data.second_moment >= 0) {
    rep.l2_sq = data.second_moment;
  } else {
    rep.l2_sq = integrate(
        [&](double r) { return r * r * data.density(r); }, -B, B);
  }
  if (!std::isfinite(rep.l2_sq))
    rep.failures.push_back(witness("second moment not finite", 0, rep.l2_sq));

  double sup = 0, arg = 0;
  for (int i = 0; i < ns; ++i) {
    double r = -B + 2.0 * B * double(i) / double(ns - 1);
    if (std::fabs(r) < 1.0) continue;
    double v = std::pow(std::fabs(r), 1.0 + data.eps0) * data.density(r);
    if (v > sup) {
      sup = v;
      arg = r;
    }
  }
  rep.tail_sup = sup;
  if (std::fabs(arg) > B - 2.0 * B / double(ns - 1) - 1e-12)
    rep.failures.push_back(
        witness("moment tail bound not attained inside the sampled range",
                arg, sup));

  rep.pass = rep.failures.empty();
  return rep;
}

WholeLineReport whole_line_simulate(const SolverConfig& cfg,
                                    const WholeLineData& data) {
  check_config(cfg);
  const auto& radii = cfg.r_ladder.radii;
  if (radii.size() < 2)
    throw config_error("whole line: the truncation ladder needs >= 2 radii");
  for (size_t k = 0; k + 1 < radii.size(); ++k)
    if (!(radii[k] > 0) || !(radii[k + 1] > radii[k]))
      throw config_error("whole line: ladder radii must be increasing");

  AdmissibilityReport adm = whole_line_admissibility(data, cfg);
  if (!adm.pass) {
    std::ostringstream os;
    os << "whole line: datum not admissible:";
    for (const auto& f : adm.failures) os << " [" << f << "]";
    throw config_error(os.str());
  }

  std::function<double(double)> cdf =
      data.cdf ? data.cdf : tabulate_cdf(data.density, radii.back() + 4.0);

  auto quantile = [&](double x, double R) {
    double lo = -R, hi = R;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * R; ++it) {
      double mid = 0.5 * (lo + hi);
      (cdf(mid) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  WholeLineReport rep;
  rep.window_lo = cdf(-radii[0]);
  rep.window_hi = cdf(radii[0]);

  for (double R : radii) {
    double a = cdf(-R), b = cdf(R);
    double mk = b - a;
    SolverConfig sub = cfg;
    sub.mode = solver_mode::bounded;
    sub.R = R;
    sub.m = mk;

    Profile p0;
    p0.t = 0;
    p0.m = mk;
    p0.R = R;
    p0.gamma = cfg.gamma;
    p0.x.resize(cfg.N);
    p0.u.resize(cfg.N);
    for (int i = 0; i < cfg.N; ++i) {
      double x = mk * double(i) / double(cfg.N - 1);
      p0.x[i] = x;
      p0.u[i] = quantile(a + x, R);
    }
    p0.x.back() = mk;
    p0.u.front() = -R;
    p0.u.back() = R;

    rep.radii.push_back(R);
    rep.offsets.push_back(a);
    rep.runs.push_back(simulate(sub, p0));
  }

  const size_t nsnap = rep.runs[0].snapshots.size();
  for (const auto& run : rep.runs)
    if (run.snapshots.size() != nsnap)
      throw numerical_error(
          "whole line: truncations produced different snapshot counts");

  const int nw = 257;
  for (size_t k = 0; k + 1 < rep.runs.size(); ++k) {
    double d = 0;
    for (size_t j = 0; j < nsnap; ++j) {
      const Profile& pa = rep.runs[k].snapshots[j];
      const Profile& pb = rep.runs[k + 1].snapshots[j];
      for (int i = 0; i < nw; ++i) {
        double x = rep.window_lo + (rep.window_hi - rep.window_lo) *
                                       double(i) / double(nw - 1);
        double va = profile_eval(pa, x - rep.offsets[k]);
        double vb = profile_eval(pb, x - rep.offsets[k + 1]);
        d = std::max(d, std::fabs(va - vb));
      }
    }
    rep.diffs.push_back(d);
  }

  const double tol = cfg.r_ladder.tol;
  rep.converged = !rep.diffs.empty() && rep.diffs.back() <= tol;
  if (!rep.converged && rep.diffs.size() >= 2 &&
      rep.diffs.back() >= rep.diffs[rep.diffs.size() - 2]) {
    std::ostringstream os;
    os << "whole line: truncation differences do not decrease ("
       << rep.diffs[rep.diffs.size() - 2] << " then " << rep.diffs.back()
       << ")";
    throw numerical_error(os.str());
  }
  return rep;
}

} // namespace bfp
