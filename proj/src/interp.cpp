#include "bfp/interp.hpp"

#include <algorithm>

namespace bfp {

size_t interval_index(const std::vector<double>& x, double xq) {
  if (x.size() < 2) throw config_error("interval_index: need >= 2 nodes");
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  size_t i = (it == x.begin()) ? 0 : static_cast<size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

double lerp_eval(const std::vector<double>& x, const std::vector<double>& y,
                 double xq) {
  size_t i = interval_index(x, xq);
  double t = (xq - x[i]) / (x[i + 1] - x[i]);
  t = std::clamp(t, 0.0, 1.0);
  return y[i] + t * (y[i + 1] - y[i]);
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw config_error("Pchip: bad node arrays");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i + 1] > x_[i])) throw config_error("Pchip: x not increasing");

  std::vector<double> h(n - 1), del(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = del[0];
  } else {
    for (size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        double w1 = 2 * h[i] + h[i - 1];
        double w2 = h[i] + 2 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (d * d0 <= 0) d = 0.0;
      else if (d0 * d1 < 0 && std::abs(d) > 3 * std::abs(d0)) d = 3 * d0;
      return d;
    };
    d_[0] = end_slope(h[0], h[1], del[0], del[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  }
}

size_t Pchip::locate(double xq) const { return interval_index(x_, xq); }

double Pchip::operator()(double xq) const {
  size_t i = locate(xq);
  double h = x_[i + 1] - x_[i];
  double t = (xq - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::derivative(double xq) const {
  size_t i = locate(xq);
  double h = x_[i + 1] - x_[i];
  double t = (xq - x_[i]) / h;
  double t2 = t * t;
  double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
  double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
  return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

} // namespace bfp
