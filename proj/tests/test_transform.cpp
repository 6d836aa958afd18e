#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bfp/errors.hpp"
#include "bfp/steady.hpp"
#include "bfp/transform.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bfp;

namespace {

Profile linear_profile(double m, double R, double gamma, int n) {
  Profile p;
  p.m = m;
  p.R = R;
  p.gamma = gamma;
  for (int i = 0; i < n; ++i) {
    double x = m * i / (n - 1.0);
    p.x.push_back(x);
    p.u.push_back(-R + 2.0 * R * x / m);
  }
  p.x.back() = m;
  p.u.back() = R;
  return p;
}

} // namespace

TEST_SUITE("transform") {

TEST_CASE("profile validation") {
  auto p = linear_profile(2.0, 1.0, 4.0, 33);
  CHECK_NOTHROW(validate_profile(p));

  auto q = p;
  q.u[10] = q.u[12]; // u[11] now sits below its predecessor
  CHECK_THROWS_AS(validate_profile(q), config_error);
  q = p;
  q.u.back() = 0.5 * q.R;
  CHECK_THROWS_AS(validate_profile(q), config_error);
  q = p;
  q.x[5] = q.x[4];
  CHECK_THROWS_AS(validate_profile(q), config_error);
  q = p;
  q.u[20] = 2.0 * q.R;
  CHECK_THROWS_AS(validate_profile(q), config_error);
  q = p;
  q.gamma = 1.5;
  CHECK_THROWS_AS(validate_profile(q), config_error);
  q = p;
  q.x.pop_back();
  CHECK_THROWS_AS(validate_profile(q), config_error);
}

TEST_CASE("uniform density gives the linear cdf and profile") {
  DensityMeasure d;
  d.m = 3.0;
  d.R = 1.0;
  d.gamma = 4.0;
  const double f0 = d.m / (2.0 * d.R), delta = 1e-3;
  const int ns = 41;
  for (int i = 0; i < ns; ++i) {
    d.r.push_back(-d.R + (d.R - delta) * i / (ns - 1.0));
    d.f.push_back(f0);
  }
  for (int i = 0; i < ns; ++i) {
    d.r.push_back(delta + (d.R - delta) * i / (ns - 1.0));
    d.f.push_back(f0);
  }
  d.x_minus = d.x_plus = 0.5 * d.m;

  auto M = cdf_from_density(d);
  for (size_t k = 0; k < M.r.size(); ++k) {
    double want = d.m * (M.r[k] + d.R) / (2.0 * d.R);
    CHECK(M.lo[k] == doctest::Approx(want).epsilon(1e-13));
    CHECK(M.hi[k] == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(M.hi.back() == doctest::Approx(d.m).epsilon(1e-14));
  CHECK(cdf_eval(M, 0.25) == doctest::Approx(d.m * 1.25 / 2.0).epsilon(1e-13));

  auto p = pseudo_inverse(M, d.m);
  for (size_t i = 0; i < p.x.size(); ++i)
    CHECK(p.u[i] ==
          doctest::Approx(-d.R + 2.0 * d.R * p.x[i] / d.m).epsilon(1e-12));

  // exact node identity of the inverse pair
  auto M2 = generalized_inverse(p);
  REQUIRE(M2.r.size() == M.r.size());
  for (size_t k = 0; k < M.r.size(); ++k) {
    CHECK(M2.r[k] == M.r[k]);
    CHECK(M2.lo[k] == M.lo[k]);
    CHECK(M2.hi[k] == M.hi[k]);
  }

  auto d2 = decompose(p);
  CHECK(d2.x_p == 0.0);
  CHECK(d2.x_p_hi <= 0.05 * d.m);
  for (size_t j = 0; j < d2.r.size(); ++j)
    CHECK(d2.f[j] == doctest::Approx(f0).epsilon(1e-10));
  // the unreported mass is the |u| <= tol band, whose extent is the bracket
  CHECK(d2.mass_defect <= (d2.x_p_hi - d2.x_p_lo) + 0.01 * d.m);
}

TEST_CASE("pure atom cdf") {
  DensityMeasure d;
  d.m = 2.5;
  d.R = 1.0;
  d.gamma = 4.0;
  for (double r : {-1.0, -0.5, -1e-3, 1e-3, 0.5, 1.0}) {
    d.r.push_back(r);
    d.f.push_back(0.0);
  }
  d.x_p = d.m;
  d.x_minus = 0.0;
  d.x_plus = d.m;
  auto M = cdf_from_density(d);
  CHECK(cdf_eval(M, -0.25) == 0.0);
  CHECK(cdf_left_limit(M, 0.0) == 0.0);
  CHECK(cdf_eval(M, 0.0) == d.m);
  CHECK(cdf_eval(M, 0.7) == d.m);
  CHECK(cdf_eval(M, 1.0) == d.m);
}

TEST_CASE("atom inside a smooth cdf becomes an exact flat segment") {
  auto b4 = Mobility::bosonic(4.0);
  DensityMeasure d;
  d.R = 1.0;
  d.gamma = 4.0;
  const double theta = 0.3, a = 0.7, delta = 1e-3;
  const int ns = 101;
  for (int i = 0; i < ns; ++i)
    d.r.push_back(-d.R + (d.R - delta) * i / (ns - 1.0));
  for (int i = 0; i < ns; ++i)
    d.r.push_back(delta + (d.R - delta) * i / (ns - 1.0));
  for (double r : d.r) d.f.push_back(steady_density(b4, theta, r));
  double neg = 0;
  for (int i = 1; i < ns; ++i)
    neg += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
  double pos = 0;
  for (int i = ns + 1; i < 2 * ns; ++i)
    pos += 0.5 * (d.f[i] + d.f[i - 1]) * (d.r[i] - d.r[i - 1]);
  double fb = steady_density(b4, theta, delta);
  d.x_minus = neg + fb * delta;
  d.x_p = a;
  d.x_plus = d.x_minus + a;
  d.m = d.x_plus + fb * delta + pos;

  auto M = cdf_from_density(d);
  CHECK(cdf_left_limit(M, 0.0) == doctest::Approx(d.x_minus));
  CHECK(cdf_eval(M, 0.0) == doctest::Approx(d.x_plus));

  auto p = pseudo_inverse(M, d.m);
  double flat_lo = 0, flat_hi = 0;
  for (size_t i = 0; i + 1 < p.u.size(); ++i)
    if (p.u[i] == 0.0 && p.u[i + 1] == 0.0) {
      flat_lo = p.x[i];
      flat_hi = p.x[i + 1];
    }
  CHECK(flat_hi - flat_lo == doctest::Approx(a).epsilon(1e-13));

  auto d2 = decompose(p);
  CHECK(d2.x_p == doctest::Approx(a).epsilon(1e-10));
  CHECK(d2.x_p_lo <= a);
  CHECK(d2.x_p_hi >= a * (1.0 - 1e-12));
  CHECK(d2.x_minus == doctest::Approx(d.x_minus).epsilon(2e-2));
}

TEST_CASE("generalized inverse jumps across the zero-level flat") {
  Profile p;
  p.m = 4.0;
  p.R = 1.0;
  p.gamma = 4.0;
  // piecewise linear with a flat [1.5, 2.5] at level 0
  p.x = {0.0, 1.5, 2.5, 4.0};
  p.u = {-1.0, 0.0, 0.0, 1.0};
  auto M = generalized_inverse(p);
  REQUIRE(M.r.size() == 3);
  CHECK(M.r[1] == 0.0);
  CHECK(M.lo[1] == 1.5);
  CHECK(M.hi[1] == 2.5);
  CHECK(cdf_left_limit(M, 0.0) == 1.5);
  CHECK(cdf_eval(M, 0.0) == 2.5);

  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 33; ++k) {
    double r = U(rng);
    CHECK(profile_eval(p, cdf_eval(M, r)) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("decompose recovers equilibrium densities") {
  auto b4 = Mobility::bosonic(4.0);
  const double mc = critical_mass(b4, 1.0).value;

  auto sup = equilibrium_profile(b4, 1.0, 1.5 * mc, 513);
  Profile ps;
  ps.m = 1.5 * mc;
  ps.R = 1.0;
  ps.gamma = 4.0;
  ps.x = sup.x;
  ps.u = sup.u;
  auto ds = decompose(ps);
  const double flat = 0.5 * mc;
  CHECK(ds.x_p == doctest::Approx(flat).epsilon(0.05));
  CHECK(ds.x_p_lo <= flat);
  CHECK(ds.x_p_hi >= flat * (1.0 - 1e-12));
  // the bracket width scales like sqrt(level_tol) through the contact power
  CHECK(ds.x_p_hi - ds.x_p_lo <= 12.0 * std::sqrt(ds.level_tol));
  for (size_t j = 0; j < ds.r.size(); ++j) {
    if (std::abs(ds.r[j]) < 0.1) continue;
    CHECK(ds.f[j] ==
          doctest::Approx(steady_density(b4, 0.0, ds.r[j])).epsilon(0.02));
  }
  CHECK(ds.mass_defect <= (ds.x_p_hi - ds.x_p_lo) + 0.01 * ps.m);

  auto sub = equilibrium_profile(b4, 1.0, 0.5 * mc, 513);
  Profile pu;
  pu.m = 0.5 * mc;
  pu.R = 1.0;
  pu.gamma = 4.0;
  pu.x = sub.x;
  pu.u = sub.u;
  auto du = decompose(pu);
  CHECK(du.x_p <= 0.01 * pu.m);
  for (size_t j = 0; j < du.r.size(); ++j) {
    if (std::abs(du.r[j]) < 0.1) continue;
    CHECK(du.f[j] ==
          doctest::Approx(steady_density(b4, sub.theta, du.r[j])).epsilon(0.02));
  }
}

TEST_CASE("random instances round trip and match the scan oracle") {
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = testgen::random_density(rng, 32 + (trial % 3) * 16,
                                        trial % 2 == 0);
    const auto& d = inst.d;
    auto M = cdf_from_density(d);
    CHECK(M.hi.back() == doctest::Approx(d.m).epsilon(1e-12));

    auto p = pseudo_inverse(M, d.m);
    CHECK_NOTHROW(validate_profile(p));

    // scan oracle agreement, exact at the table nodes
    for (size_t k = 0; k < M.r.size(); ++k) {
      CHECK(profile_eval(p, M.hi[k]) ==
            oracle::pseudo_inverse_scan(M.r, M.hi, M.hi[k]));
      CHECK(profile_eval(p, M.lo[k]) ==
            oracle::pseudo_inverse_scan(M.r, M.hi, M.lo[k]));
    }

    // generalized inverse undoes the pseudo-inverse exactly at nodes
    auto M2 = generalized_inverse(p);
    REQUIRE(M2.r.size() == M.r.size());
    for (size_t k = 0; k < M.r.size(); ++k) {
      CHECK(M2.r[k] == M.r[k]);
      CHECK(M2.lo[k] == M.lo[k]);
      CHECK(M2.hi[k] == M.hi[k]);
    }

    auto d2 = decompose(p);
    CHECK(std::abs(d2.x_p - d.x_p) <= 1e-12 * std::max(1.0, d.m));
    double cell = 0;
    for (size_t k = 1; k < M.r.size(); ++k)
      cell = std::max(cell, M.lo[k] - M.hi[k - 1]);
    CHECK(d2.x_p_lo <= d.x_p + 1e-12);
    CHECK(d2.x_p_hi + cell >= d.x_p);

    double fmax = *std::max_element(d.f.begin(), d.f.end());
    double keep = std::max(0.3 * d.R, 1.5 * d2.level_tol);
    for (size_t j = 0; j < d2.r.size(); ++j) {
      if (std::abs(d2.r[j]) < keep) continue;
      CHECK(std::abs(d2.f[j] - inst.f(d2.r[j])) <=
            0.05 * (1.0 + inst.f(d2.r[j])));
    }
    CHECK(d2.mass_defect <=
          3.0 * d2.level_tol * fmax + 0.01 * d.m + 4e-3 * d.R * fmax);
  }
}

TEST_CASE("round trip error halves under grid refinement") {
  auto run = [](int ns) {
    std::mt19937_64 rng(555);
    auto inst = testgen::random_density(rng, ns, true);
    auto p = pseudo_inverse(cdf_from_density(inst.d), inst.d.m);
    auto d2 = decompose(p);
    double err = 0;
    for (size_t j = 0; j < d2.r.size(); ++j) {
      if (std::abs(d2.r[j]) < 0.4 * inst.d.R) continue;
      err = std::max(err, std::abs(d2.f[j] - inst.f(d2.r[j])));
    }
    return err;
  };
  double e32 = run(32), e64 = run(64);
  CHECK(e64 < e32);
  CHECK(e32 / e64 >= 1.7);
}

TEST_CASE("sign change counting") {
  CHECK(sign_changes({1.0, 2.0, 0.5}) == 0);
  CHECK(sign_changes({-1.0, 1.0}) == 1);
  CHECK(sign_changes({1.0, -2.0, 3.0}) == 2);
  CHECK(sign_changes({1.0, 0.0, -1.0}) == 1);
  CHECK(sign_changes({0.0, 0.0}) == 0);
  CHECK(sign_changes({}) == 0);
  CHECK(sign_changes({1.0, 1e-18, -1.0, -2.0, 1e-18, 3.0}) == 2);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(25);
    for (double& v : w) v = U(rng);
    int z = sign_changes(w);

    std::vector<double> scaled(w);
    double c = 0.5 + 3.0 * std::abs(U(rng));
    for (double& v : scaled) v *= c;
    CHECK(sign_changes(scaled) == z);

    std::vector<double> refined;
    for (size_t i = 0; i < w.size(); ++i) {
      refined.push_back(w[i]);
      if (i + 1 < w.size()) refined.push_back(0.5 * (w[i] + w[i + 1]));
    }
    CHECK(sign_changes(refined) == z);
  }
}

} // TEST_SUITE
