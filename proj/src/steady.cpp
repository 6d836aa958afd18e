#include "bfp/steady.hpp"

#include <algorithm>
#include <cmath>

#include "bfp/errors.hpp"
#include "bfp/quad.hpp"

namespace bfp {
namespace {

constexpr double kThetaMax = 50.0;

bool theta0_mass_finite(const Mobility& mob) {
  switch (mob.kind()) {
    case mobility_kind::bosonic:
      return mob.gamma() > 2.0;
    case mobility_kind::attenuated:
      return false; // cubic far tail, same far-field balance as gamma = 2
    case mobility_kind::tabulated:
      return critical_mass(mob, 1.0).finite;
  }
  return false;
}

} // namespace

double steady_density(const Mobility& mob, double theta, double r) {
  if (!(theta >= 0)) throw config_error("steady_density needs theta >= 0");
  const double v = -(0.5 * r * r + theta);
  if (!(v < 0))
    throw config_error("steady density is singular at r = 0 when theta = 0");
  return mob.phi_prime_inv(v);
}

namespace {
// graded substitution r = w^a flattens the r^(-2/gamma) singularity;
// assumes the integral is finite (gamma > 2 far-field balance)
double steady_mass_theta0_graded(const Mobility& mob, double R,
                                 double* abs_err) {
  const double g = mob.gamma();
  const double a = g / (g - 2.0);
  const double W = std::pow(R, 1.0 / a);
  auto integ = [&](double w) {
    const double r = std::pow(w, a);
    return steady_density(mob, 0.0, r) * a * std::pow(w, a - 1.0);
  };
  return 2.0 * integrate_pieces(integ, 0.0, W, {W * 1e-4, W * 1e-2, 0.5 * W},
                                1e-13, abs_err);
}
} // namespace

double steady_mass(const Mobility& mob, double R, double theta,
                   double* abs_err) {
  if (!(R > 0)) throw config_error("steady_mass needs R > 0");
  if (!(theta >= 0)) throw config_error("steady_mass needs theta >= 0");
  if (theta == 0) {
    if (!theta0_mass_finite(mob)) {
      if (abs_err) *abs_err = 0;
      return std::numeric_limits<double>::infinity();
    }
    return steady_mass_theta0_graded(mob, R, abs_err);
  }
  const double layer = std::sqrt(theta);
  auto f = [&](double r) { return steady_density(mob, theta, r); };
  return 2.0 * integrate_pieces(
                   f, 0.0, R,
                   {layer, 3 * layer, 10 * layer, R * 1e-4, R * 1e-2, 0.5 * R},
                   1e-13, abs_err);
}

CriticalMassReport critical_mass(const Mobility& mob, double R) {
  if (!(R > 0)) throw config_error("critical_mass needs R > 0");
  CriticalMassReport rep;
  rep.R = R;

  // Tail detector: partial integrals of (s/h) (-phi')^(-1/2) up to growing
  // geometric limits.
  double s_top = 1e8;
  if (mob.kind() == mobility_kind::tabulated) {
    // stay inside the table
    double back = 1.0;
    for (double s = 10.0; s <= 1e8; s *= 10.0) {
      bool ok = true;
      try {
        (void)mob.phi_prime(s);
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok) back = s;
      else break;
    }
    s_top = back;
  }
  auto integ = [&](double s) {
    return (s / mob(s)) / std::sqrt(-mob.phi_prime(s));
  };
  double prev_limit = 1.0, acc = 0.0;
  std::vector<double> tail_inc;
  for (double S = 10.0; S <= s_top * (1 + 1e-9); S *= 10.0) {
    double piece = integrate(integ, prev_limit, S, 1e-12);
    acc += piece;
    rep.partials.push_back(acc);
    tail_inc.push_back(piece);
    prev_limit = S;
  }

  auto decide = [](const std::vector<double>& inc,
                   const char* which) -> bool {
    if (inc.size() < 3)
      throw numerical_error(std::string("critical_mass: too few ") + which +
                            " partial integrals to classify");
    double last = inc.back(), prev = inc[inc.size() - 2];
    double total = 0;
    for (double v : inc) total += v;
    if (last <= 1e-13 * std::max(total, 1.0)) return true;
    double rho = last / prev;
    if (rho <= 0.90) return true;
    if (rho >= 0.97) return false;
    throw numerical_error(
        std::string("critical_mass: ") + which +
        " detector unresolved (increment ratio " + std::to_string(rho) + ")");
  };
  const bool tail_finite = decide(tail_inc, "tail");

  // Near-origin detector: partial masses with a shrinking inner cutoff.
  bool mass_side_available = true;
  bool mass_finite = tail_finite;
  std::vector<double> mass_inc;
  try {
    auto f0 = [&](double r) { return steady_density(mob, 0.0, r); };
    double outer = R, total = 0.0;
    for (int k = 1; k <= 10; ++k) {
      double inner = R * std::pow(10.0, -k);
      double piece = 2.0 * integrate(f0, inner, outer, 1e-12);
      total += piece;
      rep.mass_partials.push_back(total);
      mass_inc.push_back(piece);
      outer = inner;
    }
    // drop the first increment (bulk, not asymptotic)
    mass_inc.erase(mass_inc.begin());
    mass_finite = decide(mass_inc, "near-origin");
  } catch (const config_error&) {
    mass_side_available = false; // e.g. table does not reach the origin
  }

  if (mass_side_available && mass_finite != tail_finite)
    throw numerical_error(
        "critical_mass: tail and near-origin detectors disagree");

  rep.finite = tail_finite;
  if (rep.finite) rep.value = steady_mass_theta0_graded(mob, R, nullptr);
  return rep;
}

double theta_for_mass(const Mobility& mob, double R, double m, double tol) {
  if (!(R > 0) || !(m > 0)) throw config_error("theta_for_mass needs R, m > 0");
  if (theta0_mass_finite(mob)) {
    double mc = steady_mass(mob, R, 0.0);
    if (m >= mc) return 0.0;
  }
  double lo = 0.0, hi = 1.0;
  while (steady_mass(mob, R, hi) > m) {
    lo = hi;
    hi *= 2.0;
    if (hi > kThetaMax) {
      double m_cap = steady_mass(mob, R, kThetaMax);
      if (m_cap > m)
        throw numerical_error(
            "theta_for_mass: no bracket below theta = 50 (m(50) = " +
            std::to_string(m_cap) + " > target " + std::to_string(m) + ")");
      hi = kThetaMax;
      break;
    }
  }
  // The theta -> mass map is steep near theta = 0 (slope ~ 1/theta for
  // gamma = 2), so resolve theta well below the requested tolerance; the
  // extra bisection steps are cheap.
  double eff = std::min(tol, 1e-14 * std::max(1.0, hi));
  eff = std::max(eff, 8.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, hi));
  while (hi - lo > eff) {
    double mid = 0.5 * (lo + hi);
    (steady_mass(mob, R, mid) > m ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SteadyInverse::SteadyInverse(const Mobility& mob, double R, double theta,
                             int half_nodes)
    : mob_(&mob), R_(R), theta_(theta) {
  if (!(R > 0)) throw config_error("SteadyInverse needs R > 0");
  if (!(theta >= 0)) throw config_error("SteadyInverse needs theta >= 0");
  if (half_nodes < 64) half_nodes = 64;
  if (theta == 0 && !theta0_mass_finite(mob))
    throw numerical_error(
        "SteadyInverse: theta = 0 profile has infinite mass for this mobility");

  const double g = mob.gamma();
  const bool graded = (mob.kind() != mobility_kind::tabulated) && g > 2.0;
  rs_.resize(half_nodes + 1);
  half_.resize(half_nodes + 1);
  rs_[0] = 0.0;
  half_[0] = 0.0;
  auto f = [&](double r) { return steady_density(mob, theta, r); };
  if (graded) {
    const double a = g / (g - 2.0);
    const double W = std::pow(R, 1.0 / a);
    auto integ_w = [&](double w) {
      return f(std::pow(w, a)) * a * std::pow(w, a - 1.0);
    };
    for (int i = 1; i <= half_nodes; ++i) {
      double w0 = W * (i - 1) / half_nodes, w1 = W * i / half_nodes;
      rs_[i] = std::pow(w1, a);
      half_[i] = half_[i - 1] + gl5(integ_w, w0, w1);
    }
  } else {
    // linear grid with a refined layer near the origin when theta is small
    const double layer = std::min(10.0 * std::sqrt(std::max(theta, 0.0)), R);
    std::vector<double> nodes;
    nodes.push_back(0.0);
    const int n1 = half_nodes / 2, n2 = half_nodes - n1;
    if (layer > 0 && layer < R) {
      for (int i = 1; i <= n1; ++i) nodes.push_back(layer * i / n1);
      for (int i = 1; i <= n2; ++i)
        nodes.push_back(layer + (R - layer) * i / n2);
    } else {
      for (int i = 1; i <= half_nodes; ++i) nodes.push_back(R * i / half_nodes);
    }
    for (int i = 1; i <= half_nodes; ++i) {
      rs_[i] = nodes[i];
      half_[i] = half_[i - 1] + gl5(f, nodes[i - 1], nodes[i]);
    }
  }
}

double SteadyInverse::density(double r) const {
  return steady_density(*mob_, theta_, r);
}

double SteadyInverse::lipschitz() const {
  return 1.0 / steady_density(*mob_, theta_, R_);
}

double SteadyInverse::cdf(double r) const {
  const double half_total = half_.back();
  double ar = std::min(std::abs(r), R_);
  size_t i = interval_index(rs_, ar);
  auto f = [&](double s) { return steady_density(*mob_, theta_, s); };
  double c = half_[i] + (ar > rs_[i] ? gl5(f, rs_[i], ar) : 0.0);
  c = std::min(c, half_total);
  return r >= 0 ? half_total + c : half_total - c;
}

double SteadyInverse::r_of_half(double q) const {
  const double half_total = half_.back();
  if (q <= 0) return 0.0;
  if (q >= half_total) return R_;
  size_t i = interval_index(half_, q);
  const double r_base = rs_[i];
  double lo = rs_[i], hi = rs_[i + 1];
  double t = (q - half_[i]) / (half_[i + 1] - half_[i]);
  double r = lo + t * (hi - lo);
  auto f = [&](double s) { return steady_density(*mob_, theta_, s); };
  for (int it = 0; it < 40; ++it) {
    double resid = half_[i] + (r > r_base ? gl5(f, r_base, r) : 0.0) - q;
    if (resid > 0) hi = r;
    else lo = r;
    double rn = r - resid / f(std::max(r, 0.5 * (lo + hi)));
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    if (std::abs(rn - r) < 1e-15 * (1.0 + r)) {
      r = rn;
      break;
    }
    r = rn;
  }
  return r;
}

double SteadyInverse::inv_cdf(double xi) const {
  const double m = mass();
  xi = std::clamp(xi, 0.0, m);
  double q = xi - 0.5 * m;
  double r = r_of_half(std::abs(q));
  return q >= 0 ? r : -r;
}

EquilibriumProfile equilibrium_profile(const Mobility& mob, double R, double m,
                                       int n_nodes) {
  if (n_nodes < 2) throw config_error("equilibrium_profile needs >= 2 nodes");
  EquilibriumProfile p;
  p.theta = theta_for_mass(mob, R, m);
  SteadyInverse inv(mob, R, p.theta);
  const double m_density = inv.mass();
  p.flat_mass = (p.theta == 0.0) ? std::max(0.0, m - m_density) : 0.0;
  p.x.resize(n_nodes);
  p.u.resize(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    double x = m * j / (n_nodes - 1);
    p.x[j] = x;
    if (p.theta > 0.0) {
      // absorb the theta-bisection mass mismatch (<= 1e-10) by rescaling
      p.u[j] = inv.inv_cdf(x * m_density / m);
    } else {
      double q = x - 0.5 * m;
      if (std::abs(q) <= 0.5 * p.flat_mass) {
        p.u[j] = 0.0;
      } else {
        double xi = 0.5 * m_density + (std::abs(q) - 0.5 * p.flat_mass);
        double r = inv.inv_cdf(xi);
        p.u[j] = q >= 0 ? r : -r;
      }
    }
  }
  p.u.front() = -R;
  p.u.back() = R;
  return p;
}

} // namespace bfp
