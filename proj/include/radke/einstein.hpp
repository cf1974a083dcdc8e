#pragma once
#include "radke/density.hpp"
#include "radke/radial_weight.hpp"
#include "radke/twister.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace radke {

enum class Gauge { Barycenter, PinValue, Free };

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 60;
  int max_halvings = 40;
  int max_bisect = 10; // continuation step bisections
  Gauge gauge = Gauge::Barycenter;
  double pin_x = 0.0;
  double pin_value = 0.0;
  int order = 6; // interior stencil order
};

struct SolveInfo {
  int iterations = 0;
  double residual = 0.0;            // Newton residual (sup norm)
  double certificate = 0.0;         // sup norm of the first variation at the solution
  std::vector<double> trace;        // residual per iteration
};

/// Monge-Ampere barycenter int x phi'' / mass (tail gap masses assigned to
/// the grid edges).
double ma_barycenter(const RadialWeight& w);

/// Newton solve of phi'' = M e^{-phi - twister} / int e^{-phi - twister}.
/// Translation-symmetric twisters (none, conical) are solved in the even
/// subspace after barycenter centering and require a gauge; the returned
/// constant is normalized so that int e^{-tau} = 2 / (tau slope span),
/// which reproduces the closed-form anchors exactly.
RadialWeight solve_twisted_ke(const TwisterSpec& tw, const RadialWeight& phi_init,
                              const SolverConfig& cfg, SolveInfo* info = nullptr);

/// Continuity path phi'' = M e^{-t phi - (1-t) phi0 - twister} / int (same),
/// warm-started along the schedule; failed steps are bisected up to
/// cfg.max_bisect times.
std::vector<RadialWeight> continuity_path(const TwisterSpec& tw, const RadialWeight& phi0,
                                          const std::vector<double>& schedule,
                                          const SolverConfig& cfg,
                                          std::vector<SolveInfo>* infos = nullptr);

struct CdsPathResult {
  std::vector<RadialWeight> members;
  std::vector<double> deviations; // sup |phi(s) - phi_base| per schedule entry
  double max_deviation = 0.0;
};

/// Fixed-path analogue: solves phi'' = C e^{-s (phi - phi_base)} phi_base''
/// with C pinned by mass, seeded at phi_base. The constancy report is the
/// numerical counterpart of the fixed continuity family.
CdsPathResult cds_path(const RadialWeight& phi_base, const std::vector<double>& schedule,
                       const SolverConfig& cfg);

struct ConeLimitRow {
  double eps = 0.0;
  double dist = 0.0; // sup over the window after gauge alignment
  double mass = 0.0;
  double F = 0.0;
  double D = 0.0;
};

struct ConeLimitResult {
  std::vector<ConeLimitRow> rows;
  bool strictly_decreasing = false;
};

/// Smoothed-cone solutions for a decreasing eps list; distances to the
/// football after translation and constant alignment over |x| <= window.
ConeLimitResult cone_limit_study(double beta, const std::vector<double>& eps_list, double window,
                                 const Grid& grid, const SolverConfig& cfg);
void write_cone_limit_csv(const ConeLimitResult& r, std::ostream& os);

/// Recenters the Monge-Ampere barycenter to zero by translation (cubic
/// resampling; slopes unchanged).
RadialWeight normalize_automorphism(const RadialWeight& phi);

struct UniquenessReport {
  std::vector<std::string> seeds;
  std::vector<std::vector<double>> raw_distances;
  std::vector<std::vector<double>> normalized_distances;
  double max_raw = 0.0;
  double max_normalized = 0.0;
  std::string verdict; // "unique" | "non-unique"
  std::vector<RadialWeight> solutions;
};

/// Solves from every seed. Strictly positive twisters are judged on raw
/// distances; conical/none on distances after normalize_automorphism.
UniquenessReport uniqueness_experiment(const TwisterSpec& tw,
                                       const std::vector<RadialWeight>& seeds,
                                       const std::vector<std::string>& seed_names,
                                       const SolverConfig& cfg);
void write_uniqueness_json(const UniquenessReport& r, std::ostream& os);

} // namespace radke
