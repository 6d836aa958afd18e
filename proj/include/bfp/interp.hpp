#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

#include "bfp/errors.hpp"

namespace bfp {

// Monotone cubic interpolation (Fritsch-Carlson). Nodes must be strictly
// increasing in x; if y is monotone the interpolant is monotone too.
class Pchip {
public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const;
  double derivative(double xq) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

private:
  size_t locate(double xq) const;
  std::vector<double> x_, y_, d_;
};

// Index of the last node <= xq in a sorted grid (clamped to [0, n-2]).
size_t interval_index(const std::vector<double>& x, double xq);

// Piecewise-linear evaluation on a sorted grid, clamped at the ends.
double lerp_eval(const std::vector<double>& x, const std::vector<double>& y,
                 double xq);

} // namespace bfp
