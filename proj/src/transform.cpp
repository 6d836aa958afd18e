#include "bfp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfp/errors.hpp"
#include "bfp/interp.hpp"

namespace bfp {
namespace {

double span_tol(double scale) { return 1e-12 * std::max(1.0, scale); }

// trapezoid over consecutive pairs, skipping gaps where the abscissae are
// not adjacent samples of the same side of the origin
double trapz_sides(const std::vector<double>& r, const std::vector<double>& f) {
  double s = 0;
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i] < 0 && r[i + 1] > 0) continue; // the origin gap
    s += 0.5 * (f[i] + f[i + 1]) * (r[i + 1] - r[i]);
  }
  return s;
}

} // namespace

void validate_profile(const Profile& p) {
  if (p.x.size() != p.u.size() || p.x.size() < 2)
    throw config_error("profile needs matching x/u arrays with >= 2 nodes");
  if (!(p.m > 0) || !(p.R > 0))
    throw config_error("profile needs m > 0 and R > 0");
  if (!(p.gamma >= 2.0)) throw config_error("profile needs gamma >= 2");
  const double tx = span_tol(p.m), tu = span_tol(p.R);
  if (std::abs(p.x.front()) > tx || std::abs(p.x.back() - p.m) > tx)
    throw config_error("profile x grid must span [0, m]");
  for (size_t i = 1; i < p.x.size(); ++i)
    if (!(p.x[i] > p.x[i - 1]))
      throw config_error("profile x grid must be strictly increasing");
  if (std::abs(p.u.front() + p.R) > tu || std::abs(p.u.back() - p.R) > tu)
    throw config_error("profile must run from u = -R to u = +R");
  for (size_t i = 0; i < p.u.size(); ++i) {
    if (std::abs(p.u[i]) > p.R + tu)
      throw config_error("profile has |u| > R");
    if (i && p.u[i] < p.u[i - 1])
      throw config_error("profile u values must be non-decreasing");
  }
}

double profile_eval(const Profile& p, double xq) {
  return lerp_eval(p.x, p.u, xq);
}

double cdf_eval(const CdfTable& M, double r) {
  if (M.r.empty()) throw config_error("empty cdf table");
  if (r < M.r.front()) return 0.0;
  if (r >= M.r.back()) return M.hi.back();
  size_t k = interval_index(M.r, r);
  if (r == M.r[k]) return M.hi[k];
  double w = (r - M.r[k]) / (M.r[k + 1] - M.r[k]);
  return M.hi[k] + w * (M.lo[k + 1] - M.hi[k]);
}

double cdf_left_limit(const CdfTable& M, double r) {
  if (M.r.empty()) throw config_error("empty cdf table");
  if (r <= M.r.front()) return 0.0;
  if (r > M.r.back()) return M.hi.back();
  size_t k = interval_index(M.r, r);
  if (r == M.r[k]) return M.lo[k]; // k > 0 here since r > front
  if (r == M.r[k + 1]) return M.lo[k + 1];
  double w = (r - M.r[k]) / (M.r[k + 1] - M.r[k]);
  return M.hi[k] + w * (M.lo[k + 1] - M.hi[k]);
}

CdfTable cdf_from_density(const DensityMeasure& d) {
  const size_t n = d.r.size();
  if (n < 2 || d.f.size() != n)
    throw config_error("density needs matching r/f arrays with >= 2 nodes");
  if (!(d.m > 0) || !(d.R > 0))
    throw config_error("density needs m > 0 and R > 0");
  const double tr = span_tol(d.R), tm = span_tol(d.m);
  if (std::abs(d.r.front() + d.R) > tr || std::abs(d.r.back() - d.R) > tr)
    throw config_error("density grid must span [-R, R]");
  size_t n_neg = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!(d.f[i] >= 0)) throw config_error("negative density sample");
    if (d.r[i] == 0.0)
      throw config_error("density grid must exclude r = 0");
    if (i && !(d.r[i] > d.r[i - 1]))
      throw config_error("density grid must be strictly increasing");
    if (d.r[i] < 0) n_neg = i + 1;
  }
  if (n_neg == 0 || n_neg == n)
    throw config_error("density grid needs nodes on both sides of r = 0");
  if (!(d.x_minus >= -tm) || !(d.x_plus >= d.x_minus - tm) ||
      !(d.x_plus <= d.m + tm))
    throw config_error("density needs 0 <= x_minus <= x_plus <= m");

  CdfTable M;
  M.t = d.t;
  M.m = d.m;
  M.R = d.R;
  M.gamma = d.gamma;
  M.r.reserve(n + 1);
  M.lo.reserve(n + 1);
  M.hi.reserve(n + 1);
  double acc = 0.0;
  for (size_t i = 0; i < n_neg; ++i) {
    if (i) acc += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
    M.r.push_back(d.r[i]);
    M.lo.push_back(acc);
    M.hi.push_back(acc);
  }
  M.r.push_back(0.0);
  M.lo.push_back(d.x_minus); // the panel (r_a, 0) absorbs the unsampled mass
  M.hi.push_back(d.x_plus);
  double pos_sum = 0.0;
  for (size_t i = n_neg + 1; i < n; ++i)
    pos_sum += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
  double gap = d.m - d.x_plus - pos_sum; // mass of the panel (0, r_b)
  acc = d.x_plus + gap;
  for (size_t i = n_neg; i < n; ++i) {
    if (i > n_neg) acc += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
    M.r.push_back(d.r[i]);
    M.lo.push_back(acc);
    M.hi.push_back(acc);
  }

  // the pieces above are only consistent up to quadrature error; monotonize
  // and refuse if that moves anything materially
  double adjust = 0.0, run = 0.0;
  for (size_t k = 0; k < M.r.size(); ++k) {
    if (M.lo[k] < run) {
      adjust = std::max(adjust, run - M.lo[k]);
      M.lo[k] = run;
    }
    if (M.hi[k] < M.lo[k]) {
      adjust = std::max(adjust, M.lo[k] - M.hi[k]);
      M.hi[k] = M.lo[k];
    }
    run = M.hi[k];
  }
  if (adjust > 1e-6 * std::max(1.0, d.m))
    throw config_error(
        "density fields are inconsistent: cumulative mass not monotone");
  return M;
}

Profile pseudo_inverse(const CdfTable& M, double m) {
  const size_t n = M.r.size();
  if (n < 2 || M.lo.size() != n || M.hi.size() != n)
    throw config_error("cdf table needs matching r/lo/hi arrays, >= 2 nodes");
  if (!(M.R > 0)) throw config_error("cdf table needs R > 0");
  const double tr = span_tol(M.R), tm = span_tol(std::max(m, M.hi.back()));
  if (std::abs(M.r.front() + M.R) > tr || std::abs(M.r.back() - M.R) > tr)
    throw config_error("cdf table must span [-R, R]");
  if (std::abs(M.lo.front()) > tm)
    throw config_error("cdf table must start at mass 0");
  if (std::abs(M.hi.back() - m) > tm)
    throw config_error("cdf table mass mismatch: M(R) != m");
  for (size_t k = 0; k < n; ++k) {
    if (k && !(M.r[k] > M.r[k - 1]))
      throw config_error("cdf table r nodes must be strictly increasing");
    if (!(M.hi[k] >= M.lo[k]))
      throw config_error("cdf table needs lo <= hi at every node");
    if (k && !(M.lo[k] > M.hi[k - 1]))
      throw config_error("cdf table must be strictly increasing between atoms");
  }

  Profile p;
  p.t = M.t;
  p.m = m;
  p.R = M.R;
  p.gamma = M.gamma;
  for (size_t k = 0; k < n; ++k) {
    p.x.push_back(M.lo[k]);
    p.u.push_back(M.r[k]);
    if (M.hi[k] > M.lo[k]) { // atom: flat segment at level r[k]
      p.x.push_back(M.hi[k]);
      p.u.push_back(M.r[k]);
    }
  }
  return p;
}

CdfTable generalized_inverse(const Profile& p) {
  validate_profile(p);
  CdfTable M;
  M.t = p.t;
  M.m = p.m;
  M.R = p.R;
  M.gamma = p.gamma;
  const size_t n = p.u.size();
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && p.u[j + 1] == p.u[i]) ++j;
    M.r.push_back(p.u[i]);
    M.lo.push_back(p.x[i]);
    M.hi.push_back(p.x[j]);
    i = j + 1;
  }
  return M;
}

DensityMeasure decompose(const Profile& p, const SlopeThresholdPolicy& pol) {
  validate_profile(p);
  const size_t n = p.x.size();
  std::vector<double> du(n);
  if (n >= 3) {
    double h1 = p.x[1] - p.x[0], h2 = p.x[2] - p.x[1];
    du[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * p.u[0] +
            (h1 + h2) / (h1 * h2) * p.u[1] -
            h1 / (h2 * (h1 + h2)) * p.u[2];
    double g2 = p.x[n - 1] - p.x[n - 2], g1 = p.x[n - 2] - p.x[n - 3];
    du[n - 1] = (2.0 * g2 + g1) / (g2 * (g1 + g2)) * p.u[n - 1] -
                (g1 + g2) / (g1 * g2) * p.u[n - 2] +
                g2 / (g1 * (g1 + g2)) * p.u[n - 3];
  } else {
    du[0] = du[n - 1] = (p.u[n - 1] - p.u[0]) / (p.x[n - 1] - p.x[0]);
  }
  for (size_t i = 1; i + 1 < n; ++i)
    du[i] = (p.u[i + 1] - p.u[i - 1]) / (p.x[i + 1] - p.x[i - 1]);

  double max_du = 0, max_dx = 0;
  for (size_t i = 0; i < n; ++i) max_du = std::max(max_du, du[i]);
  for (size_t i = 1; i < n; ++i) max_dx = std::max(max_dx, p.x[i] - p.x[i - 1]);
  double tol = pol.level_override
                   ? *pol.level_override
                   : std::max(pol.eps_mult *
                                  std::numeric_limits<double>::epsilon() * p.R,
                              pol.kappa * max_dx * max_du);
  tol = std::min(tol, 0.5 * p.R);

  // edges of the |u| <= tol band, each located in its crossing panel
  size_t il = 0;
  while (il + 1 < n && p.u[il + 1] < -tol) ++il;
  double slope_lo = (p.u[il + 1] - p.u[il]) / (p.x[il + 1] - p.x[il]);
  double xe_lo =
      p.x[il] + (-tol - p.u[il]) / (p.u[il + 1] - p.u[il]) * (p.x[il + 1] - p.x[il]);
  size_t ir = n - 1;
  while (ir > 0 && p.u[ir - 1] > tol) --ir;
  double slope_hi = (p.u[ir] - p.u[ir - 1]) / (p.x[ir] - p.x[ir - 1]);
  double xe_hi =
      p.x[ir - 1] +
      (tol - p.u[ir - 1]) / (p.u[ir] - p.u[ir - 1]) * (p.x[ir] - p.x[ir - 1]);
  double raw = std::max(xe_hi - xe_lo, 0.0);

  // lower bound: widest run of bitwise-equal u values inside the band
  double strict = 0.0, strict_mid = 0.5 * (xe_lo + xe_hi);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && p.u[j + 1] == p.u[i]) ++j;
    if (j > i && std::abs(p.u[i]) <= tol && p.x[j] - p.x[i] > strict) {
      strict = p.x[j] - p.x[i];
      strict_mid = 0.5 * (p.x[i] + p.x[j]);
    }
    i = j + 1;
  }

  // project each band edge down its tangent to the contact vertex of the
  // local power model u ~ c (x - x_c)^{gamma/(gamma-2)}; for a transversal
  // crossing the two projections pass each other and the estimate collapses
  double p_exp = p.gamma > 2.0 ? p.gamma / (p.gamma - 2.0) : 1e300;
  double contact_lo = xe_lo + std::min(p_exp * tol / slope_lo, p.m);
  double contact_hi = xe_hi - std::min(p_exp * tol / slope_hi, p.m);
  double est = contact_hi - contact_lo;
  double x_p = std::min(std::max(est, strict), raw);
  double mid = strict > 0 ? strict_mid
                          : std::min(std::max(0.5 * (contact_lo + contact_hi),
                                              xe_lo),
                                     xe_hi);
  double x_minus = mid - 0.5 * x_p, x_plus = mid + 0.5 * x_p;
  if (x_minus < xe_lo) { x_plus += xe_lo - x_minus; x_minus = xe_lo; }
  if (x_plus > xe_hi) { x_minus -= x_plus - xe_hi; x_plus = xe_hi; }

  DensityMeasure d;
  d.t = p.t;
  d.m = p.m;
  d.R = p.R;
  d.gamma = p.gamma;
  d.x_p = x_p;
  d.x_p_lo = strict;
  d.x_p_hi = raw;
  d.x_minus = x_minus;
  d.x_plus = x_plus;
  d.level_tol = tol;
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(p.u[i]) <= tol || !(du[i] > 0)) continue;
    if (!d.r.empty() && !(p.u[i] > d.r.back())) continue;
    d.r.push_back(p.u[i]);
    d.f.push_back(1.0 / du[i]);
  }
  d.mass_defect = std::abs(d.x_p + trapz_sides(d.r, d.f) - p.m);
  return d;
}

int sign_changes(const std::vector<double>& w, double rel_tol) {
  double amax = 0;
  for (double v : w) amax = std::max(amax, std::abs(v));
  const double tol = rel_tol * amax;
  int z = 0, prev = 0;
  for (double v : w) {
    if (!(std::abs(v) > tol)) continue;
    int s = v > 0 ? 1 : -1;
    if (prev != 0 && s != prev) ++z;
    prev = s;
  }
  return z;
}

} // namespace bfp
