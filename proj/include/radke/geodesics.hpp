#pragma once
#include "radke/einstein.hpp"
#include "radke/radial_weight.hpp"
#include "radke/twister.hpp"

#include <iosfwd>
#include <vector>

namespace radke {

/// Time-indexed family of weights with constant slopes; endpoints are the
/// inputs bitwise. eps = 0 marks a Legendre (exact) geodesic.
struct GeodesicPath {
  std::vector<double> times;
  std::vector<RadialWeight> weights;
  double eps = 0.0;
};

/// Sampled Legendre conjugate on a uniform p-grid over [a-, a+].
struct LegendreDual {
  std::vector<double> p;
  std::vector<double> samples;
};

/// Conjugate f*(p) = sup_x (p x - f(x)), np samples (defaults to grid size).
/// Rejects non-convex and degenerate (a- = a+) weights.
LegendreDual legendre_dual(const RadialWeight& w, int np = 0);

/// Discrete double conjugate back onto a grid, for involution checks.
std::vector<double> legendre_dual_inverse(const LegendreDual& d, const Grid& g);

/// Exact geodesic phi_s = ((1-s) phi0* + s phi1*)*, evaluated by continuous
/// maximization in the dual variable (machine-precision supremum of a family
/// affine in s, so the path is jointly convex to round-off).
GeodesicPath exact_geodesic(const RadialWeight& phi0, const RadialWeight& phi1, int m);

/// eps-approximation geodesic: solves Phi_ss Phi_xx - Phi_sx^2 = eps rho(x)
/// on [0,1] x [-x_max, x_max] with rho = ma_density(phi0), Dirichlet data in
/// s and slope pinning in x. Banded Newton with step halving.
GeodesicPath epsilon_geodesic(const RadialWeight& phi0, const RadialWeight& phi1, double eps,
                              const SolverConfig& cfg, int m, SolveInfo* info = nullptr);

struct DefectField {
  std::vector<double> times;               // interior times
  std::vector<std::vector<double>> f;      // acceleration defect per time
  std::vector<std::vector<double>> f_tau;  // same against the total weight
  double f_sup = 0.0;
  double identity_min = 0.0; // min/max of f phi_xx / rho over the safe window
  double identity_max = 0.0; // (only meaningful for eps > 0 paths)
};

/// Defect fields f = phi_ss - (phi_sx)^2 / phi_xx and f_tau (tau = phi +
/// twister weight). For eps > 0 the residual identity f phi_xx = eps rho is
/// evaluated over nodes with non-negligible rho.
DefectField geodesic_defect(const GeodesicPath& path, double eps,
                            const TwisterSpec* tw = nullptr);

/// Per-time convexity/decomposition record. D_second is the discrete second
/// difference of D; `assembled` is the decomposition
/// -E_second + (delta_tau + k_term + f_weighted Q) / Q built from the
/// independently quadratured pieces.
struct AuditRow {
  double s = 0.0;
  double D = 0.0;
  double D_second = 0.0;
  double delta_tau = 0.0;
  double k_term = 0.0;
  double f_weighted = 0.0;
  double E_second = 0.0;
  double assembled = 0.0;
};

/// Audit of the Ding functional along a path (base weight = path start).
std::vector<AuditRow> convexity_audit(const GeodesicPath& path, const TwisterSpec& tw);

/// CSV: "s,D,D2,delta_tau,k,f_weighted,E2".
void write_audit_csv(const std::vector<AuditRow>& rows, std::ostream& os);

} // namespace radke
