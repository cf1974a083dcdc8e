#include "radke/functionals.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace radke {

namespace {

void require_compatible(const RadialWeight& phi, const RadialWeight& phi0) {
  if (!(phi.grid == phi0.grid)) throw Error("functionals: grid mismatch");
  if (std::abs(phi.degree() - phi0.degree()) > 1e-9)
    throw Error("functionals: degree mismatch");
  if (std::abs(phi.slope_minus - phi0.slope_minus) > 1e-9)
    throw Error("functionals: slope mismatch");
}

struct GapMasses {
  double minus, plus;
};
GapMasses gaps(const RadialWeight& w) {
  return {w.edge_slope_left() - w.slope_minus, w.slope_plus - w.edge_slope_right()};
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

double energy_E(const RadialWeight& phi, const RadialWeight& phi0) {
  require_compatible(phi, phi0);
  const Grid& g = phi.grid;
  auto d = deriv2(phi.samples, g.h);
  auto d0 = deriv2(phi0.samples, g.h);
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = (phi.samples[i] - phi0.samples[i]) * (d[i] + d0[i]);
  double core = trapezoid(f, g.h);
  auto gp = gaps(phi), gp0 = gaps(phi0);
  double dm = phi.samples.front() - phi0.samples.front();
  double dp = phi.samples.back() - phi0.samples.back();
  return 0.5 * (core + dp * (gp.plus + gp0.plus) + dm * (gp.minus + gp0.minus));
}

double functional_F(const RadialWeight& phi, const TwisterSpec& tw) {
  if (!(phi.grid == tw.weight.grid)) throw Error("functional_F: grid mismatch");
  double sm = phi.slope_minus + tw.weight.slope_minus;
  double sp = phi.slope_plus + tw.weight.slope_plus;
  if (!(sm < 0.0 && sp > 0.0)) throw Error("functional_F: e^{-tau} not integrable");
  std::vector<double> v(phi.grid.n);
  for (int i = 0; i < phi.grid.n; ++i)
    v[i] = std::exp(-(phi.samples[i] + tw.weight.samples[i]));
  return -std::log(exp_quadrature(v, phi.grid, sm, sp));
}

FunctionalReport ding_value(const RadialWeight& phi, const RadialWeight& phi0,
                            const TwisterSpec& tw) {
  FunctionalReport r;
  r.mass = tw.mass;
  r.twister_tag = tw.tag();
  r.E = energy_E(phi, phi0);
  r.F = functional_F(phi, tw);
  r.D = -r.E / r.mass + r.F;
  r.J = aubin_J(phi, phi0);
  return r;
}

double aubin_J(const RadialWeight& phi, const RadialWeight& phi0) {
  require_compatible(phi, phi0);
  const Grid& g = phi.grid;
  const double M = phi.degree();
  auto d0 = deriv2(phi0.samples, g.h);
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = (phi.samples[i] - phi0.samples[i]) * d0[i];
  double core = trapezoid(f, g.h);
  auto gp0 = gaps(phi0);
  double dm = phi.samples.front() - phi0.samples.front();
  double dp = phi.samples.back() - phi0.samples.back();
  double lin = core + dp * gp0.plus + dm * gp0.minus;
  return lin / M - energy_E(phi, phi0) / M;
}

Density ding_first_variation(const RadialWeight& phi, const TwisterSpec& tw) {
  if (!(phi.grid == tw.weight.grid)) throw Error("ding_first_variation: grid mismatch");
  const Grid& g = phi.grid;
  double sm = phi.slope_minus + tw.weight.slope_minus;
  double sp = phi.slope_plus + tw.weight.slope_plus;
  if (!(sm < 0.0 && sp > 0.0)) throw Error("ding_first_variation: e^{-tau} not integrable");
  auto d = deriv2(phi.samples, g.h);
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = std::exp(-(phi.samples[i] + tw.weight.samples[i]));
  double Q = exp_quadrature(v, g, sm, sp);
  Density out;
  out.grid = g;
  out.samples.resize(g.n);
  const double M = tw.mass;
  for (int i = 0; i < g.n; ++i) out.samples[i] = d[i] / M - v[i] / Q;
  out.mass = trapezoid(out.samples, g.h);
  return out;
}

PropernessTable properness_scan(const std::vector<RadialWeight>& family,
                                const RadialWeight& phi0, const TwisterSpec& tw) {
  if (family.size() < 4) throw Error("properness_scan: need at least 4 family members");
  PropernessTable t;
  for (size_t k = 0; k < family.size(); ++k) {
    FunctionalReport r = ding_value(family[k], phi0, tw);
    t.rows.push_back({static_cast<int>(k), r.J, r.D});
  }
  // least-squares slope of D against J, envelope intercept below all points
  double n = static_cast<double>(t.rows.size());
  double sj = 0, sd = 0, sjj = 0, sjd = 0;
  double jmin = t.rows[0].J, jmax = t.rows[0].J, dmin = t.rows[0].D, dmax = t.rows[0].D;
  for (auto& r : t.rows) {
    sj += r.J;
    sd += r.D;
    sjj += r.J * r.J;
    sjd += r.J * r.D;
    jmin = std::min(jmin, r.J);
    jmax = std::max(jmax, r.J);
    dmin = std::min(dmin, r.D);
    dmax = std::max(dmax, r.D);
  }
  double den = n * sjj - sj * sj;
  t.a = den > 0 ? (n * sjd - sj * sd) / den : 0.0;
  t.b = t.rows[0].D - t.a * t.rows[0].J;
  for (auto& r : t.rows) t.b = std::min(t.b, r.D - t.a * r.J);
  if (t.a > 0.01)
    t.verdict = "coercive-consistent";
  else if (jmax - jmin > 1.0 && dmax - dmin <= 1.0)
    t.verdict = "properness violated";
  else
    t.verdict = "inconclusive";
  return t;
}

void write_properness_csv(const PropernessTable& t, std::ostream& os) {
  os << "member,J,D\n";
  for (auto& r : t.rows) os << r.member << ',' << fmtg(r.J) << ',' << fmtg(r.D) << '\n';
  os << "# verdict=" << t.verdict << ",a=" << fmtg(t.a) << ",b=" << fmtg(t.b) << '\n';
}

} // namespace radke
