#pragma once
#include "radke/density.hpp"
#include "radke/radial_weight.hpp"
#include "radke/twister.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace radke {

/// Assembled energies of one weight relative to a base. D is always the
/// assembly -E/M + F, never recomputed another way.
struct FunctionalReport {
  double E = 0.0;
  double F = 0.0;
  double D = 0.0;
  double J = 0.0;
  double mass = 0.0;
  std::string twister_tag;
};

/// Monge-Ampere energy, n = 1 form: E = (1/2) int (phi - phi0)(phi'' + phi0'').
/// Tail masses beyond the grid enter through the slope-gap terms so that
/// E(phi + c) - E(phi) = c * degree holds to round-off.
double energy_E(const RadialWeight& phi, const RadialWeight& phi0);

/// F = -log int e^{-tau}, tau = phi + twister weight.
double functional_F(const RadialWeight& phi, const TwisterSpec& tw);

/// Ding functional report: D = -E/mass + F.
FunctionalReport ding_value(const RadialWeight& phi, const RadialWeight& phi0,
                            const TwisterSpec& tw);

/// Aubin J = (1/M) int (phi - phi0) phi0'' - E/M. Nonnegative, zero at phi0.
double aubin_J(const RadialWeight& phi, const RadialWeight& phi0);

/// First variation density (1/M) phi'' - e^{-tau} / int e^{-tau}; vanishes
/// exactly at the twisted KE solution.
Density ding_first_variation(const RadialWeight& phi, const TwisterSpec& tw);

struct PropernessRow {
  int member = 0;
  double J = 0.0;
  double D = 0.0;
};

struct PropernessTable {
  std::vector<PropernessRow> rows;
  std::string verdict; // "coercive-consistent" | "properness violated" | "inconclusive"
  double a = 0.0;      // lower-envelope slope
  double b = 0.0;      // lower-envelope intercept
};

/// Scans a family for coercivity: least-squares slope of D against J,
/// envelope intercept b = min(D - a J). Verdicts per the thresholds
/// documented in the README (a > 0.01 coercive; flat D with growing J
/// violated).
PropernessTable properness_scan(const std::vector<RadialWeight>& family,
                                const RadialWeight& phi0, const TwisterSpec& tw);

/// CSV: header "member,J,D", final comment "# verdict=...,a=...,b=...".
void write_properness_csv(const PropernessTable& t, std::ostream& os);

} // namespace radke
