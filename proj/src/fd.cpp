#include "radke/fd.hpp"
#include "radke/error.hpp"

#include <cstddef>

namespace radke {

std::vector<double> deriv1(std::span<const double> w, double h) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
  if (n < 5) throw Error("deriv1: need at least 5 samples");
  std::vector<double> d(n);
  d[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
  d[1] = (w[2] - w[0]) / (2.0 * h);
  for (std::ptrdiff_t i = 2; i < n - 2; ++i)
    d[i] = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h);
  d[n - 2] = (w[n - 1] - w[n - 3]) / (2.0 * h);
  d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> deriv2(std::span<const double> w, double h, int order) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
  if (n < 9) throw Error("deriv2: need at least 9 samples");
  if (order != 2 && order != 4 && order != 6) throw Error("deriv2: order must be 2, 4 or 6");
  const double h2 = h * h;
  std::vector<double> d(n);
  auto c2 = [&](std::ptrdiff_t i) { return (w[i - 1] - 2.0 * w[i] + w[i + 1]) / h2; };
  auto c4 = [&](std::ptrdiff_t i) {
    return (-w[i - 2] + 16.0 * w[i - 1] - 30.0 * w[i] + 16.0 * w[i + 1] - w[i + 2]) / (12.0 * h2);
  };
  auto c6 = [&](std::ptrdiff_t i) {
    return (2.0 * w[i - 3] - 27.0 * w[i - 2] + 270.0 * w[i - 1] - 490.0 * w[i] +
            270.0 * w[i + 1] - 27.0 * w[i + 2] + 2.0 * w[i + 3]) / (180.0 * h2);
  };
  d[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / h2;
  d[n - 1] = (2.0 * w[n - 1] - 5.0 * w[n - 2] + 4.0 * w[n - 3] - w[n - 4]) / h2;
  for (std::ptrdiff_t i = 1; i < n - 1; ++i) {
    std::ptrdiff_t m = std::min(i, n - 1 - i);
    int reach = order / 2;
    if (m < reach) reach = static_cast<int>(m);
    switch (reach) {
      case 1: d[i] = c2(i); break;
      case 2: d[i] = c4(i); break;
      default: d[i] = c6(i); break;
    }
  }
  return d;
}

double edge_slope_left(std::span<const double> w, double h) {
  return (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
}

double edge_slope_right(std::span<const double> w, double h) {
  const std::size_t n = w.size();
  return (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
}

double trapezoid(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  double s = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
  return s * h;
}

} // namespace radke
