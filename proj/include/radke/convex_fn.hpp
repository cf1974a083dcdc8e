#pragma once
#include "radke/radial_weight.hpp"

#include <vector>

namespace radke {

/// Continuous evaluator of a convex weight: closed form when the weight
/// carries one, cubic Hermite of the samples otherwise; affine tails beyond
/// the grid. Provides the monotone derivative inverse and the Legendre
/// conjugate, both solved to near machine precision.
class ConvexFn {
public:
  explicit ConvexFn(const RadialWeight& w);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double slope_minus() const { return w_.slope_minus; }
  double slope_plus() const { return w_.slope_plus; }

  /// Solves d1(x) = p for p in (a-, a+). For sampled weights, p between the
  /// edge sample slope and the declared slope maps to the grid edge (the
  /// affine-tail kink). `hint` warm-starts the search.
  double d1_inverse(double p, double hint = 0.0) const;

  /// Legendre conjugate f*(p) = sup_x (p x - f(x)); x_arg receives the
  /// maximizer. Defined on [a-, a+]; the endpoints evaluate to the negated
  /// tail offsets.
  double conjugate(double p, double* x_arg = nullptr, double hint = 0.0) const;

private:
  RadialWeight w_;
  std::vector<double> nodal_slope_; // for the sampled path
  bool analytic_ = false;
  double x_limit_ = 0.0; // search clamp

  double sampled_value(double x) const;
  double sampled_d1(double x) const;
  double sampled_d2(double x) const;
};

} // namespace radke
