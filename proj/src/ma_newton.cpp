#include "radke/ma_newton.hpp"
#include "radke/banded.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <algorithm>
#include <cmath>

namespace radke {

namespace {

// Interior second-difference stencil matching deriv2's per-row selection.
struct Stencil {
  int reach;
  const double* coeff;
  double scale;
};

Stencil row_stencil(int i, int n, int order, double h2) {
  static const double c2[] = {1.0, -2.0, 1.0};
  static const double c4[] = {-1.0, 16.0, -30.0, 16.0, -1.0};
  static const double c6[] = {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
  int m = std::min(i, n - 1 - i);
  int reach = std::min(order / 2, m);
  switch (reach) {
    case 1: return {1, c2, 1.0 / h2};
    case 2: return {2, c4, 1.0 / (12.0 * h2)};
    default: return {3, c6, 1.0 / (180.0 * h2)};
  }
}

} // namespace

MAResult ma_newton(const MAProblem& prob, const std::vector<double>& seed, const MAOptions& opt) {
  const Grid& g = prob.grid;
  const int n = g.n;
  const int mid = g.mid();
  const double h = g.h;

  std::vector<double> phi = seed;
  if (opt.even_reduction)
    for (int i = 0; i < n; ++i) {
      double a = 0.5 * (phi[i] + phi[n - 1 - i]);
      phi[i] = a;
      phi[n - 1 - i] = a;
    }

  auto residual = [&](const std::vector<double>& p, MAEvaluation& ev, std::vector<double>& F) {
    ev = prob.eval(p);
    auto d2 = deriv2(p, h, opt.order);
    F.resize(n);
    double scale = prob.M / ev.Q;
    for (int i = 1; i < n - 1; ++i) F[i] = d2[i] - scale * ev.v[i];
    F[0] = edge_slope_left(p, h) - (prob.a_minus + ev.Tl);
    F[n - 1] = edge_slope_right(p, h) - (prob.a_plus - ev.Tr);
    if (opt.pin_row) F[mid] = 0.0;
    double r = 0.0;
    for (double f : F) r = std::max(r, std::abs(f));
    return r;
  };

  MAResult out;
  MAEvaluation ev;
  std::vector<double> F;
  double res = residual(phi, ev, F);
  out.trace.push_back(res);

  const int nr = opt.even_reduction ? mid + 1 : n; // reduced system size
  BandedMatrix B(nr, 3, 3);

  for (int it = 0; it < opt.max_iter; ++it) {
    if (res <= opt.tol) {
      out.converged = true;
      break;
    }
    // assemble banded Jacobian of the frozen-normalizer system
    B.clear();
    auto fold = [&](int j) { return (opt.even_reduction && j > mid) ? 2 * mid - j : j; };
    auto put = [&](int i, int j, double val) {
      if (i >= nr) return;
      B.add(i, fold(j), val);
    };
    // slope rows
    put(0, 0, -3.0 / (2 * h));
    put(0, 1, 4.0 / (2 * h));
    put(0, 2, -1.0 / (2 * h));
    if (!opt.even_reduction) {
      put(n - 1, n - 1, 3.0 / (2 * h));
      put(n - 1, n - 2, -4.0 / (2 * h));
      put(n - 1, n - 3, 1.0 / (2 * h));
    }
    const double scale = prob.M / ev.Q;
    const int last_row = opt.even_reduction ? mid : n - 2;
    for (int i = 1; i <= last_row; ++i) {
      if (opt.pin_row && i == mid) {
        put(i, i, 1.0);
        continue;
      }
      Stencil st = row_stencil(i, n, opt.order, h * h);
      for (int k = -st.reach; k <= st.reach; ++k)
        put(i, i + k, st.coeff[k + st.reach] * st.scale);
      put(i, i, ev.dscale[i] * scale * ev.v[i]);
    }
    B.factor();

    std::vector<double> rhs(nr);
    for (int i = 0; i < nr; ++i) rhs[i] = -F[i];
    B.solve(rhs);

    std::vector<double> delta(n);
    for (int i = 0; i < nr; ++i) delta[i] = rhs[i];
    if (opt.even_reduction)
      for (int i = mid + 1; i < n; ++i) delta[i] = delta[2 * mid - i];

    double shift = 0.0;
    if (!opt.pin_row) {
      if (opt.shift == MAOptions::Shift::Mean) {
        for (double d : delta) shift += d;
        shift /= n;
      } else if (opt.shift == MAOptions::Shift::PinNode) {
        shift = delta[opt.pin_node >= 0 ? opt.pin_node : mid];
      }
    }
    for (double& d : delta) d -= shift;

    // step halving on residual increase
    double lam = 1.0;
    std::vector<double> trial(n);
    MAEvaluation ev_t;
    std::vector<double> F_t;
    double res_t = 0.0;
    int halv = 0;
    for (;; ++halv) {
      for (int i = 0; i < n; ++i) trial[i] = phi[i] + lam * delta[i];
      res_t = residual(trial, ev_t, F_t);
      if (res_t < res || halv >= opt.max_halvings) break;
      lam *= 0.5;
    }
    double step = 0.0, mag = 0.0;
    for (int i = 0; i < n; ++i) {
      step = std::max(step, std::abs(lam * delta[i]));
      mag = std::max(mag, std::abs(phi[i]));
    }
    phi.swap(trial);
    ev = ev_t;
    F = F_t;
    res = res_t;
    out.trace.push_back(res);
    out.iterations = it + 1;
    if (step <= 1e-14 * (1.0 + mag) && res <= 10.0 * opt.tol) {
      out.converged = true; // round-off floor reached
      break;
    }
  }
  if (res <= opt.tol) out.converged = true;
  out.phi = std::move(phi);
  out.residual = res;
  if (!out.converged)
    throw SolveFailure("ma_newton: no convergence, residual=" + std::to_string(res),
                       out.trace);
  return out;
}

} // namespace radke
