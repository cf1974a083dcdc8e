#pragma once
#include <span>
#include <vector>

namespace radke {

// Nodal finite-difference operators on uniform grids. Interior stencils are
// high order; stencils degrade gracefully toward the edges where the model
// weights are exponentially close to affine.

/// First derivative at every node: 4th-order centered in the interior,
/// 2nd-order centered one node in, one-sided 2nd-order at the edges.
std::vector<double> deriv1(std::span<const double> w, double h);

/// Second derivative at every node. `order` is the interior stencil order
/// (2, 4 or 6); near-edge nodes fall back to narrower centered stencils and
/// the edge nodes use the one-sided 2nd-order 4-point formula.
std::vector<double> deriv2(std::span<const double> w, double h, int order = 6);

/// One-sided 2nd-order first derivatives at the two edges.
double edge_slope_left(std::span<const double> w, double h);
double edge_slope_right(std::span<const double> w, double h);

/// Trapezoid sum over the sampled grid (no tails).
double trapezoid(std::span<const double> f, double h);

} // namespace radke
