#include "radke/density.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <cmath>
#include <sstream>

namespace radke {

Density ma_density(const RadialWeight& w, int order) {
  if (!w.is_convex()) {
    std::ostringstream msg;
    msg << "ma_density: weight not convex at nodes";
    for (int i : w.nonconvex_nodes()) msg << ' ' << i;
    throw Error(msg.str());
  }
  Density d;
  d.grid = w.grid;
  d.samples = deriv2(w.samples, w.grid.h, order);
  double gap_plus = w.slope_plus - w.edge_slope_right();
  double gap_minus = w.edge_slope_left() - w.slope_minus;
  d.mass = trapezoid(d.samples, w.grid.h) + gap_plus + gap_minus;
  return d;
}

Density volume_density(const RadialWeight& tau) {
  if (!(tau.slope_minus < 0.0 && tau.slope_plus > 0.0))
    throw Error("volume_density: e^{-tau} not integrable (need tau'(-inf) < 0 < tau'(+inf))");
  Density d;
  d.grid = tau.grid;
  d.samples.resize(tau.grid.n);
  for (int i = 0; i < tau.grid.n; ++i) d.samples[i] = std::exp(-tau.samples[i]);
  d.mass = exp_quadrature(d.samples, tau.grid, tau.slope_minus, tau.slope_plus);
  return d;
}

Density ricci_density(const RadialWeight& w, int order) {
  const Grid& g = w.grid;
  // curvature samples: exact when the weight carries a closed form (the
  // composed log / second-difference route amplifies sample rounding far
  // beyond the tolerances otherwise)
  std::vector<double> curv;
  bool analytic = w.profile && w.profile->d2;
  if (analytic) {
    curv.resize(g.n);
    for (int i = 0; i < g.n; ++i) curv[i] = w.profile->d2(g.node(i));
  } else {
    curv = deriv2(w.samples, g.h, order);
  }
  double cmax = 0.0;
  for (double c : curv) cmax = std::max(cmax, c);
  if (!(cmax > 0.0)) throw Error("ricci_density: weight has no positive curvature");
  // below the floor the curvature is not resolvable against sample rounding;
  // treat those nodes as affine (zero Ricci density)
  double floor = analytic ? 0.0 : 1e-6 * cmax;
  int lo = 0, hi = g.n - 1;
  while (lo < g.n && !(curv[lo] > floor)) ++lo;
  while (hi >= 0 && !(curv[hi] > floor)) --hi;
  for (int i = 0; i < g.n; ++i)
    if (curv[i] < -floor)
      throw Error("ricci_density: w'' <= 0 at node " + std::to_string(i));
  if (hi - lo + 1 < 9) throw Error("ricci_density: resolvable region too small");

  std::vector<double> rho(hi - lo + 1); // Ricci potential -log w''
  for (int i = lo; i <= hi; ++i)
    rho[i - lo] = -std::log(std::max(curv[i], 1e-300));
  auto ric = deriv2(rho, g.h, order);

  Density d;
  d.grid = g;
  d.samples.assign(g.n, 0.0);
  for (int i = lo; i <= hi; ++i) d.samples[i] = ric[i - lo];
  // degree-2 completion: cone atoms at the punctures, read off the edge
  // slopes of the Ricci potential
  double sp = edge_slope_right(rho, g.h);
  double sm = edge_slope_left(rho, g.h);
  d.mass = trapezoid(ric, g.h) + (1.0 - sp) + (1.0 + sm);
  return d;
}

double exp_quadrature(const std::vector<double>& v, const Grid& g, double sigma_minus,
                      double sigma_plus) {
  if (!(sigma_minus < 0.0 && sigma_plus > 0.0))
    throw Error("exp_quadrature: non-integrable slopes");
  return trapezoid(v, g.h) + v.front() / (-sigma_minus) + v.back() / sigma_plus;
}

} // namespace radke
