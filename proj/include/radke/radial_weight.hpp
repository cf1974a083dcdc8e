#pragma once
#include "radke/grid.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace radke {

/// Closed-form description of a weight, used where sampling error matters
/// (geodesic construction, translation). Optional; sampled weights work
/// everywhere else.
struct AnalyticProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  // inverse of d1 on its open range, when available in closed form
  std::function<double(double)> d1_inverse;
};

/// Weight function w(x) on the line, x = log|z|^2, with prescribed
/// asymptotic slopes; w is extended affinely beyond the grid with offsets
/// derived from the edge samples.
struct RadialWeight {
  Grid grid;
  std::vector<double> samples;
  double slope_minus = 0.0; // a-
  double slope_plus = 0.0;  // a+
  std::shared_ptr<const AnalyticProfile> profile; // optional closed form

  double degree() const { return slope_plus - slope_minus; }
  double tail_offset_minus() const { return samples.front() + slope_minus * grid.x_max; }
  double tail_offset_plus() const { return samples.back() - slope_plus * grid.x_max; }

  /// Value at arbitrary x: cubic Hermite inside the grid (4th-order nodal
  /// slopes), affine tails outside. Uses the analytic profile if present.
  double value(double x) const;

  /// Largest violation of discrete convexity over interior nodes
  /// (positive = convex with margin). Second differences, 3-point.
  double convexity_margin() const;
  bool is_convex(double tol = -1.0) const;
  std::vector<int> nonconvex_nodes(double tol = -1.0) const;

  /// One-sided edge derivatives of the samples.
  double edge_slope_left() const;
  double edge_slope_right() const;
};

enum class WeightKind { FubiniStudy, Football, DivisorBackground, Affine };

/// Canonical closed-form weights:
///   fubini_study        2 log(2 cosh(x/2)),      slopes -1 -> +1
///   football(beta)      2 log(2 cosh(beta x/2)), slopes -+beta
///   divisor_background  same profile as fubini_study (weight of O(2))
///   affine(a, b)        a x + b
RadialWeight canonical_weight(WeightKind kind, const Grid& grid, double beta = 0.0,
                              double a = 0.0, double b = 0.0);
RadialWeight fubini_study_weight(const Grid& grid);
RadialWeight football_weight(double beta, const Grid& grid);
RadialWeight divisor_background_weight(const Grid& grid);
RadialWeight affine_weight(double a, double b, const Grid& grid);

/// w + c*sech(x - x0); preserves slopes. Throws if the sum fails the
/// discrete convexity check.
RadialWeight add_sech_bump(const RadialWeight& w, double c, double x0);

/// Sum of generic analytic profiles; slopes must be supplied by the caller.
RadialWeight weight_from_profile(std::shared_ptr<const AnalyticProfile> p,
                                 double slope_minus, double slope_plus, const Grid& grid);

/// w(x + a) resampled onto the same grid (cubic Hermite; affine tails).
/// The analytic profile, when present, is shifted exactly.
RadialWeight translate_weight(const RadialWeight& w, double a);

/// Scale: s*w (slopes scale too). Used for rescaled seeds.
RadialWeight scale_weight(const RadialWeight& w, double s);

/// Pointwise sum/shift helpers (same grid, slopes add).
RadialWeight add_weights(const RadialWeight& a, const RadialWeight& b);
RadialWeight shift_weight(const RadialWeight& w, double c);

/// Text serialization: header "# x w", one "x<TAB>w" pair per node, trailer
/// lines "# slope_minus=...", "# slope_plus=...". 17 significant digits;
/// round-trips bit-exactly.
void save_weight(const RadialWeight& w, std::ostream& os);
void save_weight_file(const RadialWeight& w, const std::string& path);
RadialWeight load_weight(std::istream& is);
RadialWeight load_weight_file(const std::string& path);

} // namespace radke
