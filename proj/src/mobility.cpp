#include "bfp/mobility.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bfp/quad.hpp"

namespace bfp {
namespace {

double psi(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

// C^inf step: 0 at 0, 1 at 1, flat to all orders at both ends.
double smoothstep(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  double a = psi(x), b = psi(1.0 - x);
  return a / (a + b);
}

// T(x) = int_0^x smoothstep, fixed 64-panel Simpson for reproducibility.
double smoothstep_integral(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 0.5 + (x - 1.0); // int_0^1 = 1/2 by symmetry
  return simpson(smoothstep, 0.0, x, 64);
}

// log(s) - log1p(s^gamma)/gamma, rearranged so neither half-range cancels:
// for s > 1 the two logs are nearly equal and the difference collapses to
// -log1p(s^-gamma)/gamma.
double bosonic_phi_prime(double s, double gamma) {
  if (s <= 1.0) return std::log(s) - std::log1p(std::pow(s, gamma)) / gamma;
  return -std::log1p(std::pow(s, -gamma)) / gamma;
}

} // namespace

double Mobility::eta_bridge(double v, double beta) {
  if (v <= 0) return 0.0;
  if (v <= 1) return std::pow(v, beta);
  if (v >= 2) return std::pow(1.5, beta);
  // g(v) = v - T(v-1): C^inf, non-decreasing, g <= v, g(2) = 3/2
  double g = v - smoothstep_integral(v - 1.0);
  return std::pow(g, beta);
}

Mobility Mobility::bosonic(double gamma) {
  if (!(gamma >= 1.0)) throw config_error("bosonic mobility needs gamma >= 1");
  Mobility m;
  m.kind_ = mobility_kind::bosonic;
  m.gamma_ = gamma;
  return m;
}

Mobility Mobility::attenuated(double gamma, double eps) {
  if (!(gamma >= 2.0))
    throw config_error("attenuated mobility needs gamma >= 2");
  if (!(eps > 0.0 && eps <= 1.0))
    throw config_error("attenuated mobility needs eps in (0, 1]");
  Mobility m;
  m.kind_ = mobility_kind::attenuated;
  m.gamma_ = gamma;
  m.eps_ = eps;
  const double beta = gamma - 2.0;
  m.att_c_ = std::pow(1.5 / eps, beta);
  const double s2 = 2.0 / eps;
  m.att_pp_s2_ = -0.5 * std::log1p(1.0 / (m.att_c_ * s2 * s2));
  // phi_prime across the bridge [s1, s2] is only available by integrating
  // 1/h, which is too slow to do per call (callers integrate over phi_prime
  // themselves); tabulate it once instead. 1/h is smooth here, so 256
  // Gauss-Legendre panels put the table error near machine precision.
  const double s1 = 1.0 / eps;
  const int np = 256;
  std::vector<double> xs(np + 1), cum(np + 1);
  for (int i = 0; i <= np; ++i)
    xs[i] = s1 * std::pow(2.0, double(i) / np);
  cum[0] = 0.0;
  for (int i = 1; i <= np; ++i)
    cum[i] = cum[i - 1] +
             gl5([&](double z) { return 1.0 / m(z); }, xs[i - 1], xs[i]);
  m.att_pp_s1_ = m.att_pp_s2_ - cum[np];
  for (int i = 0; i <= np; ++i) cum[i] += m.att_pp_s1_;
  m.att_pp_.emplace(std::move(xs), std::move(cum));
  return m;
}

Mobility Mobility::tabulated(std::vector<double> s, std::vector<double> h,
                             std::vector<double> s_cut) {
  if (s.size() < 3 || s.size() != h.size())
    throw config_error("tabulated mobility needs >= 3 rows of equal length");
  for (size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0) || !(h[i] > 0))
      throw config_error("tabulated mobility needs positive s and h");
    if (i && !(s[i] > s[i - 1]))
      throw config_error("tabulated mobility: s must be strictly increasing");
    if (i && !(h[i] >= h[i - 1]))
      throw config_error("tabulated mobility: h must be non-decreasing");
  }
  Mobility m;
  m.kind_ = mobility_kind::tabulated;
  const size_t n = s.size();
  m.tail_p_ = std::log(h[n - 1] / h[n - 2]) / std::log(s[n - 1] / s[n - 2]);
  m.tail_a_ = h[n - 1] / std::pow(s[n - 1], m.tail_p_);
  m.head_p_ = std::log(h[1] / h[0]) / std::log(s[1] / s[0]);
  m.head_a_ = h[0] / std::pow(s[0], m.head_p_);
  m.gamma_ = m.tail_p_ - 1.0; // h ~ a s^(1+gamma) at the far end
  if (m.tail_p_ > 1.0) {
    m.pp_back_ =
        -std::pow(s[n - 1], 1.0 - m.tail_p_) / (m.tail_a_ * (m.tail_p_ - 1.0));
  } else {
    m.pp_back_ = std::numeric_limits<double>::quiet_NaN();
  }
  m.tab_lo_ = s.front();
  m.tab_hi_ = s.back();
  std::vector<double> ls(n), lh(n);
  for (size_t i = 0; i < n; ++i) {
    ls[i] = std::log(s[i]);
    lh[i] = std::log(h[i]);
  }
  m.tab_.emplace(std::move(ls), std::move(lh));
  m.s_cut_ = std::move(s_cut);
  m.snode_ = std::move(s);
  // cumulative int 1/h over the table, one Gauss-Legendre panel per sample
  // gap; phi_prime lookups then cost a partial panel instead of an adaptive
  // integral across the whole table.
  m.cum_.assign(n, 0.0);
  for (size_t i = 1; i < n; ++i)
    m.cum_[i] = m.cum_[i - 1] + gl5([&](double z) { return 1.0 / m.h_tab(z); },
                                    m.snode_[i - 1], m.snode_[i]);
  return m;
}

double Mobility::h_tab(double s) const {
  if (s < tab_lo_ || s > tab_hi_)
    throw config_error("tabulated mobility evaluated outside the table");
  return std::exp((*tab_)(std::log(s)));
}

double Mobility::operator()(double s) const {
  if (!(s >= 0)) throw config_error("mobility needs s >= 0");
  switch (kind_) {
    case mobility_kind::bosonic:
      return s * (1.0 + std::pow(s, gamma_));
    case mobility_kind::attenuated: {
      const double beta = gamma_ - 2.0;
      double eta = std::pow(eps_, -beta) * eta_bridge(eps_ * s, beta);
      return s * (1.0 + s * s * eta);
    }
    case mobility_kind::tabulated:
      return h_tab(s);
  }
  return 0.0;
}

double Mobility::phi_prime(double s) const {
  if (!(s > 0)) throw config_error("phi_prime needs s > 0");
  switch (kind_) {
    case mobility_kind::bosonic:
      return bosonic_phi_prime(s, gamma_);
    case mobility_kind::attenuated: {
      const double s1 = 1.0 / eps_, s2 = 2.0 / eps_;
      if (s >= s2) return -0.5 * std::log1p(1.0 / (att_c_ * s * s));
      if (s >= s1) return (*att_pp_)(s);
      return bosonic_phi_prime(s, gamma_) +
             (att_pp_s1_ - bosonic_phi_prime(s1, gamma_));
    }
    case mobility_kind::tabulated:
      return phi_prime_tab(s);
  }
  return 0.0;
}

double Mobility::phi_prime_tab(double s) const {
  if (std::isnan(pp_back_))
    throw numerical_error(
        "tabulated mobility: tail exponent <= 1, phi_prime diverges");
  if (s < tab_lo_ || s > tab_hi_)
    throw config_error("phi_prime evaluated outside the table");
  size_t i = interval_index(snode_, s);
  double cs = cum_[i];
  if (s > snode_[i])
    cs += gl5([&](double z) { return 1.0 / h_tab(z); }, snode_[i], s);
  return pp_back_ - (cum_.back() - cs);
}

double Mobility::phi(double s) const {
  if (!(s >= 0)) throw config_error("phi needs s >= 0");
  if (s == 0) return 0.0;
  // phi(s) = s phi'(s) - int_0^s sigma/h(sigma): the remaining integrand is
  // bounded (sigma/h -> 1 as sigma -> 0 for the smooth kinds).
  switch (kind_) {
    case mobility_kind::bosonic: {
      auto g = [&](double z) { return 1.0 / (1.0 + std::pow(z, gamma_)); };
      std::vector<double> cuts;
      for (double c = 1.0; c < s; c *= 10.0) cuts.push_back(c);
      return s * phi_prime(s) - integrate_pieces(g, 0.0, s, cuts);
    }
    case mobility_kind::attenuated: {
      auto g = [&](double z) { return z > 0 ? z / (*this)(z) : 1.0; };
      return s * phi_prime(s) -
             integrate_pieces(g, 0.0, s, {1.0 / eps_, 2.0 / eps_});
    }
    case mobility_kind::tabulated: {
      const double front = tab_lo_;
      if (s < front || s > tab_hi_)
        throw config_error("phi evaluated outside the table");
      if (!(head_p_ < 2.0))
        throw numerical_error(
            "tabulated mobility: head exponent >= 2, phi diverges at 0");
      double head =
          std::pow(front, 2.0 - head_p_) / (head_a_ * (2.0 - head_p_));
      double mid = integrate_pieces([&](double z) { return z / h_tab(z); },
                                    front, s, s_cut_);
      return s * phi_prime(s) - head - mid;
    }
  }
  return 0.0;
}

double Mobility::phi_prime_inv(double v) const {
  if (!(v < 0)) throw config_error("phi_prime_inv needs v < 0");
  if (kind_ == mobility_kind::bosonic) {
    double x = -gamma_ * v;
    if (x >= 40.0) return std::exp(v);
    return std::pow(std::expm1(x), -1.0 / gamma_);
  }
  double lo, hi;
  if (kind_ == mobility_kind::attenuated) {
    // attenuated h <= bosonic h, so its phi_prime is smaller pointwise and
    // the bosonic inverse is a lower bracket
    double x = -gamma_ * v;
    lo = (x >= 40.0) ? std::exp(v) : std::pow(std::expm1(x), -1.0 / gamma_);
    hi = std::max(lo * 2, 1.0);
    while (phi_prime(hi) < v) {
      hi *= 2;
      if (hi > 1e300) throw numerical_error("phi_prime_inv: no upper bracket");
    }
  } else {
    lo = tab_lo_;
    hi = tab_hi_;
    if (v < phi_prime(lo) || v > phi_prime(hi))
      throw config_error("phi_prime_inv outside tabulated range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (phi_prime(mid) < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mobility load_mobility_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open mobility table: " + path);
  std::string line;
  if (!std::getline(in, line)) throw config_error("empty mobility table");
  auto strip = [](std::string t) {
    t.erase(std::remove_if(t.begin(), t.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            t.end());
    return t;
  };
  if (strip(line) != "s,h")
    throw config_error("mobility table must start with header 's,h'");
  std::vector<double> s, h;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (strip(line).empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double sv, hv;
    if (!(row >> sv >> hv))
      throw config_error("bad mobility table row at line " +
                         std::to_string(lineno));
    s.push_back(sv);
    h.push_back(hv);
  }
  return Mobility::tabulated(std::move(s), std::move(h));
}

} // namespace bfp
