#include "radke/twister.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <cmath>
#include <cstdio>

namespace radke {

namespace {

// q_eps(x) = 1 + 4 eps cosh^2(x/2) = (1 + 2 eps) + 2 eps cosh x
std::shared_ptr<const AnalyticProfile> log_q_profile(double eps) {
  auto p = std::make_shared<AnalyticProfile>();
  p->value = [eps](double x) { return std::log((1.0 + 2.0 * eps) + 2.0 * eps * std::cosh(x)); };
  p->d1 = [eps](double x) {
    double q = (1.0 + 2.0 * eps) + 2.0 * eps * std::cosh(x);
    return 2.0 * eps * std::sinh(x) / q;
  };
  p->d2 = [eps](double x) {
    double q = (1.0 + 2.0 * eps) + 2.0 * eps * std::cosh(x);
    return 2.0 * eps * (std::cosh(x) * (1.0 + 2.0 * eps) + 2.0 * eps) / (q * q);
  };
  return p;
}

Density sampled_chi(const AnalyticProfile& gen, double a_minus, double a_plus, const Grid& g) {
  Density chi;
  chi.grid = g;
  chi.samples.resize(g.n);
  for (int i = 0; i < g.n; ++i) chi.samples[i] = gen.d2(g.node(i));
  double gap_plus = a_plus - gen.d1(g.x_max);
  double gap_minus = gen.d1(-g.x_max) - a_minus;
  chi.mass = trapezoid(chi.samples, g.h) + gap_plus + gap_minus;
  return chi;
}

Density zero_density(const Grid& g) {
  Density d;
  d.grid = g;
  d.samples.assign(g.n, 0.0);
  d.mass = 0.0;
  return d;
}

} // namespace

std::string TwisterSpec::tag() const {
  char buf[64];
  switch (kind) {
    case TwisterKind::None: return "none";
    case TwisterKind::SmoothBackground:
      std::snprintf(buf, sizeof buf, "smooth_background(%g)", coeff);
      return buf;
    case TwisterKind::SmoothedCone:
      std::snprintf(buf, sizeof buf, "smooth(%g)", eps);
      return buf;
    case TwisterKind::Conical:
      std::snprintf(buf, sizeof buf, "conical(%g)", beta);
      return buf;
  }
  return "?";
}

TwisterSpec TwisterSpec::none(const Grid& g) {
  TwisterSpec tw;
  tw.kind = TwisterKind::None;
  tw.weight = affine_weight(0.0, 0.0, g);
  tw.chi = zero_density(g);
  tw.mass = 2.0;
  return tw;
}

TwisterSpec TwisterSpec::smooth_background(double c, const Grid& g) {
  if (!(c > 0.0 && c < 1.0)) throw Error("smooth_background: coefficient must lie in (0,1)");
  TwisterSpec tw;
  tw.kind = TwisterKind::SmoothBackground;
  tw.coeff = c;
  tw.weight = scale_weight(divisor_background_weight(g), c);
  tw.chi = sampled_chi(*tw.weight.profile, -c, c, g);
  tw.mass = 2.0 - 2.0 * c;
  return tw;
}

TwisterSpec TwisterSpec::smoothed_cone(double beta, double eps, const Grid& g) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("smoothed_cone: beta must lie in (0,1)");
  if (!(eps > 0.0)) throw Error("smoothed_cone: eps must be positive");
  TwisterSpec tw;
  tw.kind = TwisterKind::SmoothedCone;
  tw.beta = beta;
  tw.eps = eps;
  auto logq = log_q_profile(eps);
  tw.chi = sampled_chi(*logq, -1.0, 1.0, g); // chi = (log q_eps)''
  tw.weight = scale_weight(weight_from_profile(logq, -1.0, 1.0, g), 1.0 - beta);
  tw.mass = 2.0 * beta;
  return tw;
}

TwisterSpec TwisterSpec::conical(double beta, const Grid& g) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("conical: beta must lie in (0,1)");
  TwisterSpec tw;
  tw.kind = TwisterKind::Conical;
  tw.beta = beta;
  tw.weight = affine_weight(0.0, 0.0, g);
  tw.chi = zero_density(g);
  tw.mass = 2.0 * beta;
  return tw;
}

TwisterSpec smoothing_profile(double beta, double eps, const Grid& g) {
  if (eps < 0.0) throw Error("smoothing_profile: eps must be >= 0");
  if (eps == 0.0) return TwisterSpec::conical(beta, g);
  return TwisterSpec::smoothed_cone(beta, eps, g);
}

} // namespace radke
