#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <doctest.h>

#include "bfp/errors.hpp"
#include "bfp/mobility.hpp"
#include "bfp/steady.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"

using namespace bfp;

namespace {

Mobility sampled_bosonic_table(double gamma, int n = 400, double lo = 1e-3,
                               double hi = 1e3) {
  std::vector<double> s(n), h(n);
  for (int i = 0; i < n; ++i) {
    s[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    h[i] = s[i] * (1.0 + std::pow(s[i], gamma));
  }
  return Mobility::tabulated(s, h);
}

} // namespace

TEST_SUITE("equilibria") {

TEST_CASE("mobility evaluation") {
  auto b1 = Mobility::bosonic(1.0);
  CHECK(b1(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  auto b3 = Mobility::bosonic(3.0);
  CHECK(b3(2.0) == doctest::Approx(2.0 * 9.0).epsilon(1e-15));
  CHECK(b3(0.0) == 0.0);
  CHECK_THROWS_AS(b3(-1.0), config_error);
  CHECK_THROWS_AS(Mobility::bosonic(0.5), config_error);
}

TEST_CASE("attenuated mobility: equal below 1/eps, never above") {
  std::mt19937_64 rng(7);
  for (double gamma : {2.0, 3.0, 4.5}) {
    for (double eps : {1.0, 0.3, 0.05}) {
      auto h = Mobility::bosonic(gamma);
      auto phi_m = Mobility::attenuated(gamma, eps);
      double prev = 0.0;
      for (int i = 0; i <= 240; ++i) {
        double s = 1e-3 * std::pow(1e6, i / 240.0);
        double hv = h(s), pv = phi_m(s);
        CHECK(pv <= hv * (1.0 + 1e-12));
        if (s <= 1.0 / eps) CHECK(pv == doctest::Approx(hv).epsilon(1e-13));
        CHECK(pv >= prev); // monotone in s
        prev = pv;
      }
      // far tail is exactly cubic: h = s (1 + c s^2)
      double s = 4.0 / eps;
      double c = std::pow(1.5 / eps, gamma - 2.0);
      CHECK(phi_m(s) == doctest::Approx(s * (1.0 + c * s * s)).epsilon(1e-13));
    }
  }
}

TEST_CASE("phi_prime closed form and quadrature agree") {
  auto b1 = Mobility::bosonic(1.0);
  CHECK(b1.phi_prime(1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  auto b2 = Mobility::bosonic(2.0);
  CHECK(b2.phi_prime(1.0) ==
        doctest::Approx(0.5 * std::log(0.5)).epsilon(1e-15));
  for (double gamma : {1.0, 2.0, 3.0, 4.0}) {
    auto mob = Mobility::bosonic(gamma);
    for (int i = 0; i <= 24; ++i) {
      double s = 1e-3 * std::pow(1e6, i / 24.0);
      double ref = oracle::phi_prime_quadrature(gamma, s);
      CHECK(mob.phi_prime(s) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(b1.phi_prime(0.0), config_error);
}

TEST_CASE("phi_prime is strictly increasing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logs(-3.0, 3.0);
  std::vector<Mobility> mobs;
  mobs.push_back(Mobility::bosonic(2.0));
  mobs.push_back(Mobility::bosonic(3.7));
  mobs.push_back(Mobility::attenuated(3.0, 0.2));
  mobs.push_back(sampled_bosonic_table(3.0));
  for (const auto& mob : mobs) {
    for (int k = 0; k < 200; ++k) {
      double a = std::pow(10.0, logs(rng)), b = std::pow(10.0, logs(rng));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(mob.phi_prime(a) < mob.phi_prime(b));
    }
  }
}

TEST_CASE("phi values") {
  auto b1 = Mobility::bosonic(1.0);
  CHECK(b1.phi(1.0) == doctest::Approx(refval::kPhiG1S1).epsilon(1e-12));
  // closed form for gamma = 1: f ln f - (1+f) ln(1+f)
  for (double s : {0.25, 1.0, 3.0, 40.0}) {
    double closed = s * std::log(s) - (1 + s) * std::log1p(s);
    CHECK(b1.phi(s) == doctest::Approx(closed).epsilon(1e-11));
  }
  CHECK(Mobility::bosonic(2.0).phi(1.0) ==
        doctest::Approx(refval::kPhiG2S1).epsilon(1e-12));
  CHECK(Mobility::bosonic(4.0).phi(1.0) ==
        doctest::Approx(refval::kPhiG4S1).epsilon(1e-12));
  CHECK(b1.phi(0.0) == 0.0);
  for (double gamma : {1.0, 2.5, 4.0}) {
    auto mob = Mobility::bosonic(gamma);
    for (double s : {0.1, 1.0, 12.0})
      CHECK(mob.phi(s) ==
            doctest::Approx(oracle::phi_quadrature(gamma, s)).epsilon(1e-10));
  }
}

TEST_CASE("phi_prime_inv round trip") {
  std::vector<Mobility> mobs;
  mobs.push_back(Mobility::bosonic(1.0));
  mobs.push_back(Mobility::bosonic(2.0));
  mobs.push_back(Mobility::bosonic(4.0));
  mobs.push_back(Mobility::attenuated(3.0, 0.25));
  mobs.push_back(sampled_bosonic_table(3.0));
  for (const auto& mob : mobs) {
    for (int i = 0; i <= 12; ++i) {
      double s = 1e-2 * std::pow(1e4, i / 12.0);
      double v = mob.phi_prime(s);
      CHECK(mob.phi_prime_inv(v) == doctest::Approx(s).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(mobs[0].phi_prime_inv(0.5), config_error);
}

TEST_CASE("steady density examples") {
  auto b1 = Mobility::bosonic(1.0);
  CHECK(steady_density(b1, std::log(2.0), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  auto b2 = Mobility::bosonic(2.0);
  CHECK(steady_density(b2, 0.0, 1.0) ==
        doctest::Approx(refval::kDensityG2Theta0R1).epsilon(1e-14));
  CHECK_THROWS_AS(steady_density(b2, 0.0, 0.0), config_error);
  // deep tail: stable against overflow
  CHECK(steady_density(b2, 0.0, 40.0) ==
        doctest::Approx(std::exp(-800.0)).epsilon(1e-12));
}

TEST_CASE("steady mass: frozen values, divergence flag, quadrature oracle") {
  auto b4 = Mobility::bosonic(4.0);
  CHECK(steady_mass(b4, 1.0, 0.0) ==
        doctest::Approx(refval::kLimitMassG4R1).epsilon(1e-11));
  CHECK(steady_mass(b4, 1.0, 1.0) ==
        doctest::Approx(refval::kMassG4R1Theta1).epsilon(1e-11));
  CHECK(steady_mass(b4, 1.0, 0.25) ==
        doctest::Approx(refval::kMassG4R1ThetaQ).epsilon(1e-11));
  auto b2 = Mobility::bosonic(2.0);
  CHECK(std::isinf(steady_mass(b2, 1.0, 0.0)));
  CHECK(steady_mass(b2, 1.0, 0.5) ==
        doctest::Approx(oracle::steady_mass_quadrature(2.0, 1.0, 0.5))
            .epsilon(1e-10));
  auto b3 = Mobility::bosonic(3.0);
  CHECK(steady_mass(b3, 1.0, 0.0) ==
        doctest::Approx(oracle::steady_mass_quadrature(3.0, 1.0, 0.0))
            .epsilon(1e-9));
}

TEST_CASE("steady mass decreases in theta") {
  auto b4 = Mobility::bosonic(4.0);
  double prev = steady_mass(b4, 1.0, 0.0);
  for (double th : {1e-4, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    double m = steady_mass(b4, 1.0, th);
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("theta_for_mass round trip and edge cases") {
  auto b4 = Mobility::bosonic(4.0);
  double m_star = steady_mass(b4, 1.0, 1.0);
  CHECK(theta_for_mass(b4, 1.0, m_star) == doctest::Approx(1.0).epsilon(1e-8));
  double mc = steady_mass(b4, 1.0, 0.0);
  CHECK(theta_for_mass(b4, 1.0, mc * 1.5) == 0.0);
  CHECK(theta_for_mass(b4, 1.0, mc) == 0.0);
  // infinite limiting mass: any target is bracketed
  auto b2 = Mobility::bosonic(2.0);
  double th = theta_for_mass(b2, 1.0, 10.0);
  CHECK(th > 0.0);
  CHECK(steady_mass(b2, 1.0, th) == doctest::Approx(10.0).epsilon(1e-8));
  CHECK_THROWS_AS(theta_for_mass(b4, 1.0, 1e-30), numerical_error);
}

TEST_CASE("critical mass dual detection") {
  auto b4 = Mobility::bosonic(4.0);
  auto rep4 = critical_mass(b4, 1.0);
  CHECK(rep4.finite);
  CHECK(rep4.value == doctest::Approx(refval::kLimitMassG4R1).epsilon(1e-10));
  CHECK(rep4.partials.size() >= 3);
  for (size_t i = 1; i < rep4.partials.size(); ++i)
    CHECK(rep4.partials[i] >= rep4.partials[i - 1]);

  auto rep2 = critical_mass(Mobility::bosonic(2.0), 1.0);
  CHECK_FALSE(rep2.finite);
  CHECK(std::isinf(rep2.value));

  auto rep3a = critical_mass(Mobility::bosonic(3.0), 1.0);
  auto rep3b = critical_mass(Mobility::bosonic(3.0), 2.0);
  CHECK(rep3a.value == doctest::Approx(refval::kLimitMassG3R1).epsilon(1e-10));
  CHECK(rep3b.value == doctest::Approx(refval::kLimitMassG3R2).epsilon(1e-10));
  CHECK(rep3b.value > rep3a.value);

  // attenuation removes the finite limiting mass
  auto repA = critical_mass(Mobility::attenuated(4.0, 0.1), 1.0);
  CHECK_FALSE(repA.finite);
}

TEST_CASE("tabulated mobility CSV round trip") {
  const char* path = "mob_table_test.csv";
  {
    std::ofstream out(path);
    out << "s,h\n";
    for (int i = 0; i < 400; ++i) {
      double s = 1e-2 * std::pow(1e4, i / 399.0);
      out.precision(17);
      out << s << "," << s * (1.0 + s * s * s) << "\n";
    }
  }
  auto tab = load_mobility_csv(path);
  auto b3 = Mobility::bosonic(3.0);
  for (double s : {0.05, 0.7, 3.0, 55.0})
    CHECK(tab(s) == doctest::Approx(b3(s)).epsilon(1e-6));
  CHECK(tab.phi_prime(1.0) == doctest::Approx(b3.phi_prime(1.0)).epsilon(1e-4));
  CHECK_THROWS_AS(tab(1e-3), config_error);
  std::remove(path);

  {
    std::ofstream out(path);
    out << "x,y\n1,2\n";
  }
  CHECK_THROWS_AS(load_mobility_csv(path), config_error);
  std::remove(path);
  {
    std::ofstream out(path);
    out << "s,h\n1,2\n0.5,3\n2,4\n";
  }
  CHECK_THROWS_AS(load_mobility_csv(path), config_error);
  std::remove(path);
}

TEST_CASE("steady inverse cdf and equilibrium profiles") {
  auto b4 = Mobility::bosonic(4.0);
  SteadyInverse inv(b4, 1.0, 1.0);
  CHECK(inv.mass() ==
        doctest::Approx(refval::kMassG4R1Theta1).epsilon(1e-10));
  CHECK(inv.lipschitz() ==
        doctest::Approx(1.0 / steady_density(b4, 1.0, 1.0)).epsilon(1e-13));
  for (double r : {-0.95, -0.4, -0.01, 0.0, 0.2, 0.77, 1.0})
    CHECK(inv.inv_cdf(inv.cdf(r)) == doctest::Approx(r).epsilon(1e-9));

  double mc = refval::kLimitMassG4R1;
  auto sub = equilibrium_profile(b4, 1.0, 0.5 * mc, 257);
  CHECK(sub.theta > 0.0);
  CHECK(sub.flat_mass == 0.0);
  CHECK(sub.u.front() == -1.0);
  CHECK(sub.u.back() == 1.0);
  CHECK(sub.u[128] == doctest::Approx(0.0).epsilon(1e-12));
  for (size_t i = 1; i < sub.u.size(); ++i) CHECK(sub.u[i] > sub.u[i - 1]);

  auto sup = equilibrium_profile(b4, 1.0, 1.5 * mc, 513);
  CHECK(sup.theta == 0.0);
  CHECK(sup.flat_mass == doctest::Approx(0.5 * mc).epsilon(1e-9));
  int zeros = 0;
  for (double u : sup.u) zeros += (u == 0.0);
  CHECK(zeros >= 100); // plateau occupies a third of the nodes
  for (size_t i = 1; i < sup.u.size(); ++i) CHECK(sup.u[i] >= sup.u[i - 1]);
}

} // TEST_SUITE
