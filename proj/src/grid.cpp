#include "radke/grid.hpp"
#include "radke/error.hpp"

namespace radke {

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = node(i);
  return x;
}

Grid build_grid(double x_max, int n) {
  if (n % 2 == 0) throw Error("build_grid: n must be odd, got " + std::to_string(n));
  if (n < 129) throw Error("build_grid: n must be >= 129, got " + std::to_string(n));
  if (x_max < 10.0) throw Error("build_grid: x_max must be >= 10");
  Grid g;
  g.n = n;
  g.h = 2.0 * x_max / (n - 1);
  g.x_max = g.mid() * g.h;
  return g;
}

} // namespace radke
