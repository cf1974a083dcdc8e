#include "radke/convex_fn.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <algorithm>
#include <cmath>

namespace radke {

ConvexFn::ConvexFn(const RadialWeight& w) : w_(w) {
  analytic_ = static_cast<bool>(w.profile);
  if (!analytic_) nodal_slope_ = deriv1(w.samples, w.grid.h);
  x_limit_ = w.grid.x_max + 80.0;
}

double ConvexFn::sampled_value(double x) const {
  const Grid& g = w_.grid;
  if (x <= -g.x_max) return w_.samples.front() + w_.slope_minus * (x + g.x_max);
  if (x >= g.x_max) return w_.samples.back() + w_.slope_plus * (x - g.x_max);
  double u = (x + g.x_max) / g.h;
  int i = std::min(static_cast<int>(u), g.n - 2);
  double t = u - i, t2 = t * t, t3 = t2 * t;
  return w_.samples[i] * (2 * t3 - 3 * t2 + 1) + g.h * nodal_slope_[i] * (t3 - 2 * t2 + t) +
         w_.samples[i + 1] * (-2 * t3 + 3 * t2) + g.h * nodal_slope_[i + 1] * (t3 - t2);
}

double ConvexFn::sampled_d1(double x) const {
  const Grid& g = w_.grid;
  if (x <= -g.x_max) return w_.slope_minus;
  if (x >= g.x_max) return w_.slope_plus;
  double u = (x + g.x_max) / g.h;
  int i = std::min(static_cast<int>(u), g.n - 2);
  double t = u - i, t2 = t * t;
  return (w_.samples[i] * (6 * t2 - 6 * t) + g.h * nodal_slope_[i] * (3 * t2 - 4 * t + 1) +
          w_.samples[i + 1] * (-6 * t2 + 6 * t) + g.h * nodal_slope_[i + 1] * (3 * t2 - 2 * t)) /
         g.h;
}

double ConvexFn::sampled_d2(double x) const {
  const Grid& g = w_.grid;
  if (std::abs(x) >= g.x_max) return 0.0;
  double u = (x + g.x_max) / g.h;
  int i = std::min(static_cast<int>(u), g.n - 2);
  double t = u - i;
  return (w_.samples[i] * (12 * t - 6) + g.h * nodal_slope_[i] * (6 * t - 4) +
          w_.samples[i + 1] * (-12 * t + 6) + g.h * nodal_slope_[i + 1] * (6 * t - 2)) /
         (g.h * g.h);
}

double ConvexFn::value(double x) const { return analytic_ ? w_.profile->value(x) : sampled_value(x); }
double ConvexFn::d1(double x) const { return analytic_ ? w_.profile->d1(x) : sampled_d1(x); }
double ConvexFn::d2(double x) const { return analytic_ ? w_.profile->d2(x) : sampled_d2(x); }

double ConvexFn::d1_inverse(double p, double hint) const {
  if (!(p > w_.slope_minus && p < w_.slope_plus)) {
    if (p == w_.slope_minus) return -x_limit_;
    if (p == w_.slope_plus) return x_limit_;
    throw Error("ConvexFn::d1_inverse: p outside slope range");
  }
  if (analytic_ && w_.profile->d1_inverse) return w_.profile->d1_inverse(p);

  double lo = -x_limit_, hi = x_limit_;
  double x = std::clamp(hint, lo, hi);
  // expand a local bracket around the hint before refining
  double step = std::max(1.0, w_.grid.h);
  double rl = d1(x) - p;
  if (rl > 0) {
    hi = x;
    double t = x;
    while (t > lo) {
      t = std::max(lo, t - step);
      step *= 2;
      if (d1(t) - p <= 0) {
        lo = t;
        break;
      }
      hi = t;
    }
    if (d1(lo) - p > 0) return lo; // flat tail: clamp
  } else {
    lo = x;
    double t = x;
    while (t < hi) {
      t = std::min(hi, t + step);
      step *= 2;
      if (d1(t) - p >= 0) {
        hi = t;
        break;
      }
      lo = t;
    }
    if (d1(hi) - p < 0) return hi;
  }
  // safeguarded Newton on d1(x) = p
  x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double r = d1(x) - p;
    if (r > 0)
      hi = x;
    else
      lo = x;
    double curv = d2(x);
    double x_new = (curv > 0 && std::isfinite(curv)) ? x - r / curv : 0.5 * (lo + hi);
    if (!(x_new > lo && x_new < hi)) x_new = 0.5 * (lo + hi);
    if (std::abs(x_new - x) <= 1e-14 * (1.0 + std::abs(x_new))) return x_new;
    x = x_new;
    if (hi - lo <= 1e-14 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double ConvexFn::conjugate(double p, double* x_arg, double hint) const {
  if (p < w_.slope_minus || p > w_.slope_plus)
    throw Error("ConvexFn::conjugate: p outside [a-, a+]");
  if (p == w_.slope_minus) {
    if (x_arg) *x_arg = -x_limit_;
    return -(w_.samples.front() + w_.slope_minus * w_.grid.x_max); // -b_minus
  }
  if (p == w_.slope_plus) {
    if (x_arg) *x_arg = x_limit_;
    return -(w_.samples.back() - w_.slope_plus * w_.grid.x_max); // -b_plus
  }
  double x = d1_inverse(p, hint);
  if (x_arg) *x_arg = x;
  return p * x - value(x);
}

} // namespace radke
