#include "bfp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "bfp/errors.hpp"
#include "bfp/steady.hpp"

namespace bfp {
namespace {

constexpr double kFitGate = 1e-6; // min_slope below this marks f unbounded

// Maximal index runs of d.r that do not cross the origin.
std::vector<std::pair<size_t, size_t>> side_runs(const std::vector<double>& r) {
  std::vector<std::pair<size_t, size_t>> runs;
  if (r.empty()) return runs;
  size_t start = 0;
  for (size_t j = 0; j + 1 < r.size(); ++j) {
    if (r[j] < 0.0 && r[j + 1] > 0.0) {
      runs.push_back({start, j});
      start = j + 1;
    }
  }
  runs.push_back({start, r.size() - 1});
  return runs;
}

// First derivative on a non-uniform grid, second order inside each run,
// one-sided at run ends.
std::vector<double> run_derivative(const std::vector<double>& r,
                                   const std::vector<double>& f) {
  const size_t n = r.size();
  std::vector<double> df(n, 0.0);
  for (auto [a, b] : side_runs(r)) {
    size_t len = b - a + 1;
    if (len == 1) continue;
    if (len == 2) {
      double g = (f[b] - f[a]) / (r[b] - r[a]);
      df[a] = df[b] = g;
      continue;
    }
    for (size_t i = a + 1; i < b; ++i) {
      double h1 = r[i] - r[i - 1], h2 = r[i + 1] - r[i];
      df[i] = (-h2 / (h1 * (h1 + h2))) * f[i - 1] +
              ((h2 - h1) / (h1 * h2)) * f[i] +
              (h1 / (h2 * (h1 + h2))) * f[i + 1];
    }
    {
      double h1 = r[a + 1] - r[a], h2 = r[a + 2] - r[a + 1];
      df[a] = (-(2.0 * h1 + h2) / (h1 * (h1 + h2))) * f[a] +
              ((h1 + h2) / (h1 * h2)) * f[a + 1] -
              (h1 / (h2 * (h1 + h2))) * f[a + 2];
    }
    {
      double h2 = r[b] - r[b - 1], h1 = r[b - 1] - r[b - 2];
      df[b] = ((2.0 * h2 + h1) / (h2 * (h1 + h2))) * f[b] -
              ((h1 + h2) / (h1 * h2)) * f[b - 1] +
              (h2 / (h1 * (h1 + h2))) * f[b - 2];
    }
  }
  return df;
}

double trapezoid(const std::vector<double>& r, const std::vector<double>& g) {
  double s = 0.0;
  for (size_t j = 0; j + 1 < r.size(); ++j)
    s += 0.5 * (g[j] + g[j + 1]) * (r[j + 1] - r[j]);
  return s;
}

} // namespace

double entropy(const DensityMeasure& d, const Mobility& mob) {
  const size_t n = d.r.size();
  std::vector<double> g(n, 0.0);
  for (size_t j = 0; j < n; ++j)
    g[j] = 0.5 * d.r[j] * d.r[j] * d.f[j] + mob.phi(d.f[j]);
  return trapezoid(d.r, g);
}

double dissipation(const DensityMeasure& d, const Mobility& mob) {
  const size_t n = d.r.size();
  std::vector<double> df = run_derivative(d.r, d.f);
  std::vector<double> w(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    if (!(d.f[j] > 0.0)) continue;
    double h = mob(d.f[j]);
    double flux = df[j] + d.r[j] * h;
    w[j] = flux * flux / h;
  }
  return trapezoid(d.r, w);
}

double kinetic_energy(const Profile& p) { return 0.5 * l2_norm_sq(p); }

double l2_norm_sq(const Profile& p) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < p.x.size(); ++i)
    s += 0.5 * (p.u[i] * p.u[i] + p.u[i + 1] * p.u[i + 1]) *
         (p.x[i + 1] - p.x[i]);
  return s;
}

std::pair<double, double> boundary_flux_residual(const DensityMeasure& d,
                                                 const Mobility& mob) {
  std::vector<double> df = run_derivative(d.r, d.f);
  auto flux = [&](size_t j) { return df[j] + d.r[j] * mob(d.f[j]); };
  return {flux(0), flux(d.r.size() - 1)};
}

ProfileFit profile_fit(const DensityMeasure& d, double gamma, double r_lo,
                       double r_hi) {
  ProfileFit fit;
  if (r_hi <= 0.0) r_hi = 0.1 * d.R;
  if (r_lo <= 0.0) {
    double w_min = r_hi;
    for (size_t j = 0; j + 1 < d.r.size(); ++j) {
      if (d.r[j] < 0.0 && d.r[j + 1] > 0.0) continue;
      if (std::max(std::fabs(d.r[j]), std::fabs(d.r[j + 1])) > r_hi) continue;
      w_min = std::min(w_min, d.r[j + 1] - d.r[j]);
    }
    r_lo = 2.0 * w_min;
  }
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (size_t j = 0; j < d.r.size(); ++j) {
    double a = std::fabs(d.r[j]);
    if (a < r_lo || a > r_hi || !(d.f[j] > 0.0)) continue;
    double lx = std::log(a), ly = std::log(d.f[j]);
    pts.push_back({lx, ly});
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  fit.samples = int(pts.size());
  if (fit.samples < 2) return fit;
  double n = double(fit.samples);
  double det = n * sxx - sx * sx;
  if (det <= 0.0) return fit;
  double slope = (n * sxy - sx * sy) / det;
  double icept = (sy - slope * sx) / n;
  fit.exponent = slope;
  fit.prefactor = std::exp(icept);
  double ss = 0;
  for (auto [lx, ly] : pts) {
    double e = ly - (icept + slope * lx);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.applicable = fit.samples >= 8;
  (void)gamma;
  return fit;
}

double profile_bound_constant(const DensityMeasure& d, double gamma) {
  double c = 0.0;
  for (size_t j = 0; j < d.r.size(); ++j)
    c = std::max(c, d.f[j] * std::pow(std::fabs(d.r[j]), 2.0 / gamma));
  return c;
}

std::vector<double> tau_field(const Profile& before, const Profile& mid,
                              const Profile& after, const DensityMeasure& d) {
  const size_t n = mid.u.size();
  if (before.u.size() != n || after.u.size() != n)
    throw config_error("tau_field: snapshots use different grids");
  double dt = after.t - before.t;
  if (!(dt > 0)) throw config_error("tau_field: snapshots not time-ordered");

  std::vector<double> tau(d.r.size(), 0.0);
  double tol = 1e-9 * std::max(1.0, mid.R);
  for (size_t j = 0; j < d.r.size(); ++j) {
    auto it = std::lower_bound(mid.u.begin(), mid.u.end(), d.r[j]);
    size_t k = size_t(it - mid.u.begin());
    if (k == n || (k > 0 && std::fabs(mid.u[k - 1] - d.r[j]) <
                                std::fabs(mid.u[k] - d.r[j])))
      --k;
    if (std::fabs(mid.u[k] - d.r[j]) > tol)
      throw config_error("tau_field: sample is not a node value of mid");
    tau[j] = (after.u[k] - before.u[k]) / dt;
  }
  return tau;
}

std::vector<double> profile_predictor(const DensityMeasure& d,
                                      const std::vector<double>& tau,
                                      double gamma) {
  const size_t n = d.r.size();
  if (tau.size() != n)
    throw config_error("profile_predictor: tau size mismatch");
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());

  auto march = [&](const std::vector<size_t>& idx) {
    if (idx.empty()) return;
    double r0 = d.r[idx[0]], t0 = tau[idx[0]];
    // inner stub [0, r0] with tau frozen at its innermost value
    double A = -gamma * (t0 * r0 + 0.5 * r0 * r0);
    double I = 0.0;
    {
      const int panels = 16;
      double h = r0 / (2.0 * panels);
      auto g = [&](double s) {
        return s * std::exp(-gamma * (t0 * s + 0.5 * s * s));
      };
      for (int k = 0; k < panels; ++k) {
        double s0 = 2.0 * k * h;
        I += h / 3.0 * (g(s0) + 4.0 * g(s0 + h) + g(s0 + 2.0 * h));
      }
    }
    double q = std::exp(A);
    if (gamma * I / q > 0.0) out[idx[0]] = std::pow(gamma * I / q, -1.0 / gamma);
    for (size_t j = 1; j < idx.size(); ++j) {
      double rp = d.r[idx[j - 1]], rc = d.r[idx[j]];
      double ap = -gamma * (tau[idx[j - 1]] + rp);
      double ac = -gamma * (tau[idx[j]] + rc);
      double qp = q;
      A += 0.5 * (ap + ac) * (rc - rp);
      q = std::exp(A);
      I += 0.5 * (rp * qp + rc * q) * (rc - rp);
      double k = gamma * I / q;
      if (k > 0.0) out[idx[j]] = std::pow(k, -1.0 / gamma);
    }
  };

  std::vector<size_t> neg, pos;
  for (size_t j = 0; j < n; ++j)
    (d.r[j] < 0.0 ? neg : pos).push_back(j);
  std::reverse(neg.begin(), neg.end()); // innermost first
  march(neg);
  march(pos);
  return out;
}

std::vector<double> ode_flux_residual(const DensityMeasure& d,
                                      const std::vector<double>& tau,
                                      double gamma) {
  const size_t n = d.r.size();
  if (tau.size() != n)
    throw config_error("ode_flux_residual: tau size mismatch");
  std::vector<double> df = run_derivative(d.r, d.f);
  std::vector<double> res(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    if (!(d.f[j] > 0.0)) continue;
    res[j] = df[j] / d.f[j] + d.r[j] * std::pow(d.f[j], gamma) + tau[j] +
             d.r[j];
  }
  return res;
}

double curvature_sign_band(const Profile& p, double level) {
  if (level < 0.0) level = decompose(p).level_tol;
  std::vector<std::pair<double, double>> nodes; // (|u|, signed curvature)
  for (size_t i = 1; i + 1 < p.x.size(); ++i) {
    if (std::fabs(p.u[i]) <= level) continue;
    double h1 = p.x[i + 1] - p.x[i], h2 = p.x[i] - p.x[i - 1];
    double upp = 2.0 *
                 (h2 * p.u[i + 1] - (h1 + h2) * p.u[i] + h1 * p.u[i - 1]) /
                 (h1 * h2 * (h1 + h2));
    double sg = p.u[i] > 0.0 ? 1.0 : -1.0;
    nodes.push_back({std::fabs(p.u[i]), upp * sg});
  }
  std::sort(nodes.begin(), nodes.end());
  for (const auto& [au, s] : nodes)
    if (!(s > 0.0)) return au;
  return p.R;
}

CondensationCriterion condensation_criterion(double m, double E0, double gamma,
                                             double B_gamma) {
  if (!(gamma > 2.0))
    throw config_error("condensation_criterion: needs gamma > 2");
  if (!(B_gamma > 0.0))
    throw config_error("condensation_criterion: B_gamma must be positive");
  if (!(m > 0.0) || E0 < 0.0)
    throw config_error("condensation_criterion: bad mass or energy");
  CondensationCriterion c;
  if (E0 == 0.0) {
    c.satisfied = true;
    c.margin = std::numeric_limits<double>::infinity();
    c.blowup_time_bound = 0.0;
    return c;
  }
  c.margin = B_gamma * std::pow(m, 1.5 * gamma) /
                 std::pow(2.0 * E0, 0.5 * (gamma - 2.0)) -
             m;
  c.satisfied = c.margin > 0.0;
  if (c.satisfied) c.blowup_time_bound = E0 / c.margin;
  return c;
}

MajorizationReport partial_mass_majorization(
    const std::function<double(double)>& f0, const Mobility& mob, double theta,
    double R, int samples) {
  if (!(theta > 0.0))
    throw config_error("partial_mass_majorization: needs theta > 0");
  if (samples < 3)
    throw config_error("partial_mass_majorization: too few samples");
  MajorizationReport rep;
  double F = 0.0, G = 0.0;
  double prev_ft = 0.0, prev_g = 0.0, prev_r = 0.0;
  for (int k = 0; k < samples; ++k) {
    double r = R * double(k) / double(samples - 1);
    double ft = std::max(f0(r), f0(-r));
    double g = steady_density(mob, theta, r);
    if (k > 0) {
      double h = r - prev_r;
      F += 0.5 * (prev_ft + ft) * h;
      G += 0.5 * (prev_g + g) * h;
    }
    double excess = F - G;
    if (k == 0 || excess > rep.max_excess) {
      rep.max_excess = excess;
      rep.r_at_max = r;
    }
    prev_ft = ft;
    prev_g = g;
    prev_r = r;
  }
  rep.holds = rep.max_excess <= 1e-12 * std::max(1.0, G);
  return rep;
}

namespace {

// Linear interpolation of a sampled density; nan outside the sampled range
// and inside the straddle panel around the origin atom.
double density_eval(const DensityMeasure& d, double r, bool skip_straddle) {
  const auto& rs = d.r;
  if (rs.empty() || r < rs.front() || r > rs.back())
    return std::numeric_limits<double>::quiet_NaN();
  auto it = std::upper_bound(rs.begin(), rs.end(), r);
  size_t j = it == rs.begin() ? 0 : size_t(it - rs.begin()) - 1;
  if (j + 1 >= rs.size()) j = rs.size() - 2;
  if (skip_straddle && rs[j] < 0.0 && rs[j + 1] > 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  double w = (r - rs[j]) / (rs[j + 1] - rs[j]);
  return d.f[j] + w * (d.f[j + 1] - d.f[j]);
}

} // namespace

ComparisonReport comparison_check(const Trajectory& a, const Trajectory& b,
                                  double tol) {
  if (a.snapshots.size() != b.snapshots.size())
    throw config_error("comparison_check: snapshot counts differ");
  if (a.snapshots.empty())
    throw config_error("comparison_check: empty trajectories");
  double R = a.snapshots[0].R;
  if (std::fabs(b.snapshots[0].R - R) > 1e-12 * std::max(1.0, R))
    throw config_error("comparison_check: domains differ");

  ComparisonReport rep;
  const int grid_n = 401;
  for (size_t k = 0; k < a.snapshots.size(); ++k) {
    const Profile& pa = a.snapshots[k];
    const Profile& pb = b.snapshots[k];
    if (std::fabs(pa.t - pb.t) > 1e-9 * std::max(1.0, pa.t))
      throw config_error("comparison_check: snapshot times differ");
    DensityMeasure da = decompose(pa);
    DensityMeasure db = decompose(pb);
    double band = std::max(da.level_tol, db.level_tol);
    for (int g = 0; g < grid_n; ++g) {
      double r = -R + 2.0 * R * double(g) / double(grid_n - 1);
      if (std::fabs(r) <= band) continue;
      double fa = density_eval(da, r, true);
      double fb = density_eval(db, r, true);
      if (std::isnan(fa) || std::isnan(fb)) continue;
      double v = fa - fb - tol;
      if (v > rep.max_violation) {
        rep.max_violation = v;
        rep.t_witness = pa.t;
        rep.r_witness = r;
        rep.ordered = false;
      }
    }
    double mw = std::min(pa.m, pb.m);
    std::vector<double> w;
    for (size_t i = 0; i < pa.x.size(); ++i) {
      if (pa.x[i] > mw) break;
      w.push_back(pa.u[i] - profile_eval(pb, pa.x[i]));
    }
    rep.crossings.push_back(sign_changes(w));
  }
  for (size_t k = 1; k < rep.crossings.size(); ++k)
    if (rep.crossings[k] > rep.crossings[k - 1])
      rep.crossings_nonincreasing = false;
  return rep;
}

IntersectionReport intersection_check(const Trajectory& a, const Trajectory& b,
                                      double x_lo, double x_hi) {
  if (a.snapshots.size() != b.snapshots.size())
    throw config_error("intersection_check: snapshot counts differ");
  if (a.snapshots.empty())
    throw config_error("intersection_check: empty trajectories");
  double mw = std::min(a.snapshots[0].m, b.snapshots[0].m);
  if (!(0.0 <= x_lo) || !(x_lo < x_hi) || !(x_hi <= mw))
    throw config_error("intersection_check: window outside both domains");

  IntersectionReport rep;
  const int grid_n = 257;
  int lo_state = 0, hi_state = 0; // -1, 0, +1 classes seen so far
  bool lo_mixed = false, hi_mixed = false;
  for (size_t k = 0; k < a.snapshots.size(); ++k) {
    const Profile& pa = a.snapshots[k];
    const Profile& pb = b.snapshots[k];
    std::vector<double> w(grid_n);
    double wmax = 0.0;
    for (int g = 0; g < grid_n; ++g) {
      double x = x_lo + (x_hi - x_lo) * double(g) / double(grid_n - 1);
      w[g] = profile_eval(pa, x) - profile_eval(pb, x);
      wmax = std::max(wmax, std::fabs(w[g]));
    }
    double dead = 1e-10 * wmax;
    auto classify = [&](double v) { return v > dead ? 1 : (v < -dead ? -1 : 0); };
    int cl = classify(w.front()), ch = classify(w.back());
    if (cl != 0) {
      if (lo_state != 0 && cl != lo_state) lo_mixed = true;
      lo_state = cl;
    }
    if (ch != 0) {
      if (hi_state != 0 && ch != hi_state) hi_mixed = true;
      hi_state = ch;
    }
    rep.z.push_back(sign_changes(w));
  }
  rep.applicable = !lo_mixed && !hi_mixed;
  for (size_t k = 1; k < rep.z.size(); ++k) {
    if (rep.z[k] > rep.z[k - 1]) {
      rep.nonincreasing = false;
      if (rep.witness_from < 0) {
        rep.witness_from = int(k - 1);
        rep.witness_to = int(k);
      }
    }
  }
  return rep;
}

std::vector<DiagnosticsRecord> diagnose(const Trajectory& traj) {
  std::vector<DiagnosticsRecord> recs;
  if (traj.snapshots.empty()) return recs;
  Mobility mob = Mobility::bosonic(traj.config.gamma);
  double H0 = 0.0, cum = 0.0, prev_D = 0.0, prev_t = 0.0;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const Profile& p = traj.snapshots[k];
    DensityMeasure d = decompose(p);
    DiagnosticsRecord rec;
    rec.t = p.t;
    rec.H = entropy(d, mob);
    rec.D_R = dissipation(d, mob);
    rec.x_p_lo = d.x_p_lo;
    rec.x_p = d.x_p;
    rec.x_p_hi = d.x_p_hi;
    rec.E = kinetic_energy(p);
    rec.l2_sq = l2_norm_sq(p);
    double ms = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < p.x.size(); ++i)
      ms = std::min(ms, (p.u[i + 1] - p.u[i]) / (p.x[i + 1] - p.x[i]));
    rec.min_slope = std::max(ms, 0.0);
    rec.sup_f = 0.0;
    for (double f : d.f) rec.sup_f = std::max(rec.sup_f, f);
    auto fl = boundary_flux_residual(d, mob);
    rec.flux_left = fl.first;
    rec.flux_right = fl.second;
    if (k == 0) {
      H0 = rec.H;
    } else {
      cum += 0.5 * (prev_D + rec.D_R) * (rec.t - prev_t);
    }
    rec.entropy_identity_defect = std::fabs(rec.H - H0 + cum);
    if (rec.min_slope < kFitGate) {
      ProfileFit fit = profile_fit(d, traj.config.gamma);
      if (fit.applicable) {
        rec.profile_exponent = fit.exponent;
        rec.profile_prefactor = fit.prefactor;
      }
    }
    prev_D = rec.D_R;
    prev_t = rec.t;
    recs.push_back(rec);
  }
  return recs;
}

} // namespace bfp
