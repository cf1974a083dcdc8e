#pragma once
#include "radke/grid.hpp"
#include "radke/radial_weight.hpp"

#include <vector>

namespace radke {

/// Sampled density on a grid together with its total mass (grid quadrature
/// plus the analytic tail contribution appropriate to the density's origin).
struct Density {
  Grid grid;
  std::vector<double> samples;
  double mass = 0.0;
};

/// Monge-Ampere density w''(x). Mass equals degree(w): grid quadrature plus
/// the slope-gap masses (a+ - w'(x_max)) and (w'(-x_max) - a-) that sit
/// between the edge and infinity. Throws on non-convex input, listing the
/// violating nodes.
Density ma_density(const RadialWeight& w, int order = 6);

/// Volume density e^{-tau(x)}. Mass = trapezoid + closed-form exponential
/// tails anchored at the edge samples. Requires tau'(-inf) < 0 < tau'(+inf).
Density volume_density(const RadialWeight& tau);

/// Ricci density -(log w'')''. For the Fubini-Study weight this equals
/// ma_density (Ric = omega in the degree-2 class). Mass is the degree-2
/// completion: grid quadrature plus the cone atoms (1 -+ edge slopes of
/// -log w'') at the two punctures. Requires w'' > 0 on interior nodes.
Density ricci_density(const RadialWeight& w, int order = 6);

/// Trapezoid plus exponential tails for integrals of e^{-tau}-type samples:
/// integral of v over the grid plus v_edge/|slope| beyond each edge.
double exp_quadrature(const std::vector<double>& v, const Grid& g, double sigma_minus,
                      double sigma_plus);

} // namespace radke
