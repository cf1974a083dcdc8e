#pragma once
#include "radke/radial_weight.hpp"
#include "radke/twister.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace radke {

/// Divergence-form discretization of the weighted Laplacian: symmetric
/// tridiagonal stiffness a(u,v) = int (u'v'/tau'') e^{-tau} with half-node
/// coefficients, diagonal mass b(u,v) = int uv e^{-tau} (trapezoid plus
/// constant-extension tails). Constants span the exact kernel of a.
struct WeightedForms {
  Grid grid;
  std::vector<double> a_diag, a_off; // tridiagonal stiffness
  std::vector<double> b_diag;        // lumped mass
  double volume = 0.0;               // b(1,1) = int e^{-tau}

  double a_value(const std::vector<double>& u) const;
  double b_value(const std::vector<double>& u) const;
  double b_inner(const std::vector<double>& u, const std::vector<double>& v) const;
};

WeightedForms weighted_laplacian_form(const RadialWeight& tau);

struct SpectralPair {
  double lambda = 0.0;
  std::vector<double> u; // b-normalized, mean-zero under e^{-tau}
  double rayleigh_residual = 0.0;
};

/// The `count` smallest nonzero eigenvalues of the pencil (a, b) on
/// mean-zero functions, by Sturm bisection and inverse iteration; the exact
/// zero mode (constants) is deflated.
std::vector<SpectralPair> lowest_spectrum(const RadialWeight& tau, int count);

/// delta_tau = a(u,u) - b(pi_perp u, pi_perp u), quadratured with 4th-order
/// nodal derivatives (finer than the eigensolver's 3-point forms).
double delta_tau(const RadialWeight& tau, const std::vector<double>& u);

/// k = int u'^2 (1/phi'' - 1/tau'') e^{-tau}; flags nodes where the twister
/// weight loses convexity (tau'' < phi'').
double k_gap(const RadialWeight& phi, const RadialWeight& tau, const std::vector<double>& u);

struct FieldReport {
  double c = 0.0;      // best-fit coefficient of z d/dz
  double defect = 0.0; // weighted sup |u'/tau'' - c|
};

/// Extracts the holomorphic-field coefficient from a velocity potential:
/// w = phi_dot' / tau''; c is its e^{-tau}-mean and the defect the weighted
/// sup deviation. defect ~ 0 certifies V = c z d/dz.
FieldReport extract_field(const std::vector<double>& phi_dot, const RadialWeight& tau);

/// Radial form of the contraction of the field against the twister:
/// "field annihilates twister" iff sup |c chi| <= 1e-10; a strictly positive
/// window with c != 0 forces "contradiction: field must vanish".
std::string twister_kernel_check(const FieldReport& field, const TwisterSpec& tw);

/// CSV: "index,lambda,rayleigh_residual".
void write_spectrum_csv(const std::vector<SpectralPair>& spec, std::ostream& os);

} // namespace radke
