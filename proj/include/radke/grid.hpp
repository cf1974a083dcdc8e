#pragma once
#include <vector>

namespace radke {

/// Uniform symmetric grid on [-x_max, x_max] with an odd number of nodes,
/// so that x = 0 is a node exactly.
struct Grid {
  double x_max = 0.0;   // half-width (equals mid*h exactly)
  int n = 0;            // node count, odd
  double h = 0.0;       // spacing

  int mid() const { return (n - 1) / 2; }
  double node(int i) const {
    int k = i - mid();
    return k * h; // symmetric by construction, node(mid) == 0 exactly
  }
  std::vector<double> nodes() const;
  bool operator==(const Grid&) const = default;
};

/// Build a grid. Rejects even n, n < 129 and x_max < 10 (tails of e^{-tau}
/// would not be negligible on shorter domains).
Grid build_grid(double x_max, int n);

} // namespace radke
