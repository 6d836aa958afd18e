#pragma once
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bfp/steady.hpp"
#include "bfp/transform.hpp"

namespace testgen {

// Random smooth positive density on [-R, R] with a small hole at the origin
// and an optional origin atom. Cumulative fields are filled with the same
// trapezoid rule the cdf builder uses, so the instance is self-consistent.
struct DensityInstance {
  bfp::DensityMeasure d;
  double c0 = 0, c1 = 0, c2 = 0, om = 0, ph = 0;
  double f(double r) const {
    double c = std::cos(om * r + ph);
    return c0 + c1 * c * c + c2 * r * r;
  }
};

inline DensityInstance random_density(std::mt19937_64& rng, int side_nodes,
                                      bool with_atom) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  DensityInstance inst;
  bfp::DensityMeasure& d = inst.d;
  d.R = 0.5 + 1.5 * U(rng);
  d.gamma = 2.0 + 3.0 * U(rng);
  const double delta = 1e-3 * d.R;
  inst.c0 = 0.1 + U(rng);
  inst.c1 = U(rng);
  inst.c2 = U(rng);
  inst.om = 1.0 + 3.0 * U(rng);
  inst.ph = 6.283185307179586 * U(rng);
  const int ns = side_nodes;
  for (int i = 0; i < ns; ++i) {
    double r = -d.R + (d.R - delta) * i / (ns - 1.0);
    d.r.push_back(r);
    d.f.push_back(inst.f(r));
  }
  for (int i = 0; i < ns; ++i) {
    double r = delta + (d.R - delta) * i / (ns - 1.0);
    d.r.push_back(r);
    d.f.push_back(inst.f(r));
  }
  double neg = 0, pos = 0;
  for (int i = 1; i < ns; ++i)
    neg += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
  for (int i = ns + 1; i < 2 * ns; ++i)
    pos += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
  const double bridge_n = 0.5 * (inst.f(-delta) + inst.f(0.0)) * delta;
  const double bridge_p = 0.5 * (inst.f(0.0) + inst.f(delta)) * delta;
  d.x_p = with_atom ? 0.2 + U(rng) : 0.0;
  d.x_minus = neg + bridge_n;
  d.x_plus = d.x_minus + d.x_p;
  d.x_p_lo = d.x_p_hi = d.x_p;
  d.m = d.x_plus + bridge_p + pos;
  return inst;
}

inline bfp::Profile equilibrium_datum(const bfp::Mobility& mob, double gamma,
                                      double R, double m, int n) {
  auto eq = bfp::equilibrium_profile(mob, R, m, n);
  bfp::Profile p;
  p.t = 0;
  p.m = m;
  p.R = R;
  p.gamma = gamma;
  p.x = std::move(eq.x);
  p.u = std::move(eq.u);
  return p;
}

inline double min_panel_slope(const bfp::Profile& p) {
  double s = 1e300;
  for (size_t i = 0; i + 1 < p.x.size(); ++i)
    s = std::min(s, (p.u[i + 1] - p.u[i]) / (p.x[i + 1] - p.x[i]));
  return s;
}

// Sine perturbation scaled so the slope stays >= (1 - amp) of the base
// minimum; ends are untouched, so |u| <= R survives.
inline bfp::Profile slope_bump(const bfp::Profile& base, double amp, int k) {
  bfp::Profile p = base;
  double a = amp * min_panel_slope(base) * p.m / (k * M_PI);
  for (size_t i = 0; i < p.x.size(); ++i)
    p.u[i] += a * std::sin(k * M_PI * p.x[i] / p.m);
  p.u.front() = -p.R;
  p.u.back() = p.R;
  return p;
}

inline double sup_diff(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

} // namespace testgen
