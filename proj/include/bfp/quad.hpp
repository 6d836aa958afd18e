#pragma once
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bfp/errors.hpp"

namespace bfp {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive Gauss-Kronrod on [a, b]; a and b may be +-infinity.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12,
                 double* abs_err = nullptr) {
  double err = 0;
  double v = gk15::integrate(f, a, b, 15, tol, &err);
  if (abs_err) *abs_err = err;
  return v;
}

// Same, but split at interior breakpoints (sorted, clipped to (a, b)).
template <class F>
double integrate_pieces(F&& f, double a, double b, std::vector<double> pts,
                        double tol = 1e-12, double* abs_err = nullptr) {
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [&](double p) { return p < a || p > b; }),
            pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0, err_total = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double err = 0;
    total += gk15::integrate(f, pts[i], pts[i + 1], 15, tol, &err);
    err_total += err;
  }
  if (abs_err) *abs_err = err_total;
  return total;
}

// Fixed 5-point Gauss-Legendre on [a, b]; exact through degree 9, used for
// short smooth panels where an adaptive rule would be wasted.
template <class F>
double gl5(F&& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 5; ++i) s += ws[i] * f(c + h * xs[i]);
  return s * h;
}

// Composite Simpson with n panels (n rounded up to even); deterministic,
// used where a fixed bit-for-bit reproducible rule is wanted.
template <class F>
double simpson(F&& f, double a, double b, int n = 64) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

} // namespace bfp
