#include "radke/geodesics.hpp"
#include "radke/banded.hpp"
#include "radke/convex_fn.hpp"
#include "radke/density.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"
#include "radke/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace radke {

namespace {

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_endpoints(const RadialWeight& a, const RadialWeight& b) {
  if (!(a.grid == b.grid)) throw Error("geodesic: grid mismatch");
  if (std::abs(a.slope_minus - b.slope_minus) > 1e-12 ||
      std::abs(a.slope_plus - b.slope_plus) > 1e-12)
    throw Error("geodesic: slope mismatch");
  if (!a.is_convex() || !b.is_convex()) throw Error("geodesic: endpoints must be convex");
}

} // namespace

LegendreDual legendre_dual(const RadialWeight& w, int np) {
  if (!(w.slope_plus > w.slope_minus))
    throw Error("legendre_dual: degenerate weight (a- = a+)");
  if (!w.is_convex()) throw Error("legendre_dual: weight not convex");
  if (np <= 1) np = w.grid.n;
  ConvexFn f(w);
  LegendreDual d;
  d.p.resize(np);
  d.samples.resize(np);
  double span = w.slope_plus - w.slope_minus;
  double hint = 0.0;
  for (int k = 0; k < np; ++k) {
    double p = w.slope_minus + span * k / (np - 1);
    if (k == np - 1) p = w.slope_plus;
    d.p[k] = p;
    double x;
    d.samples[k] = f.conjugate(p, &x, hint);
    if (std::isfinite(x) && std::abs(x) < w.grid.x_max + 50) hint = x;
  }
  return d;
}

std::vector<double> legendre_dual_inverse(const LegendreDual& d, const Grid& g) {
  std::vector<double> out(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.node(i), best = -1e300;
    for (size_t k = 0; k < d.p.size(); ++k)
      best = std::max(best, d.p[k] * x - d.samples[k]);
    out[i] = best;
  }
  return out;
}

GeodesicPath exact_geodesic(const RadialWeight& phi0, const RadialWeight& phi1, int m) {
  check_endpoints(phi0, phi1);
  if (m < 2) throw Error("exact_geodesic: need m >= 2");
  const Grid& g = phi0.grid;
  const double am = phi0.slope_minus, ap = phi0.slope_plus;
  ConvexFn f0(phi0), f1(phi1);

  GeodesicPath path;
  path.eps = 0.0;
  path.times.resize(m);
  path.weights.resize(m);
  for (int j = 0; j < m; ++j) path.times[j] = static_cast<double>(j) / (m - 1);
  path.weights[0] = phi0;
  path.weights[m - 1] = phi1;

  const double pspan = ap - am;
  for (int j = 1; j < m - 1; ++j) {
    const double s = path.times[j];
    RadialWeight w;
    w.grid = g;
    w.samples.resize(g.n);
    w.slope_minus = am;
    w.slope_plus = ap;
    double p_warm = am + 0.5 * pspan;
    double x0_warm = 0.0, x1_warm = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double x = g.node(i);
      // maximize p x - (1-s) f0*(p) - s f1*(p): stationarity
      //   x = (1-s) x0(p) + s x1(p), the RHS increasing in p
      double lo = am, hi = ap;
      double p = std::clamp(p_warm, am + 1e-15 * pspan, ap - 1e-15 * pspan);
      double x0 = 0, x1 = 0;
      for (int it = 0; it < 200; ++it) {
        x0 = f0.d1_inverse(p, x0_warm);
        x1 = f1.d1_inverse(p, x1_warm);
        x0_warm = x0;
        x1_warm = x1;
        double r = x - ((1.0 - s) * x0 + s * x1);
        if (r > 0)
          lo = p;
        else
          hi = p;
        if (std::abs(r) <= 1e-12 * (1.0 + std::abs(x))) break;
        double c0 = f0.d2(x0), c1 = f1.d2(x1);
        double gpp = (c0 > 0 ? (1.0 - s) / c0 : 0.0) + (c1 > 0 ? s / c1 : 0.0);
        double p_new = gpp > 0 ? p + r / gpp : 0.5 * (lo + hi);
        if (!(p_new > lo && p_new < hi)) p_new = 0.5 * (lo + hi);
        if (hi - lo <= 4e-16 * pspan) {
          p = p_new;
          break;
        }
        p = p_new;
      }
      double g0 = p * x0 - f0.value(x0);
      double g1 = p * x1 - f1.value(x1);
      w.samples[i] = p * x - (1.0 - s) * g0 - s * g1;
      p_warm = p;
    }
    path.weights[j] = std::move(w);
  }
  return path;
}

GeodesicPath epsilon_geodesic(const RadialWeight& phi0, const RadialWeight& phi1, double eps,
                              const SolverConfig& cfg, int m, SolveInfo* info) {
  check_endpoints(phi0, phi1);
  if (eps == 0.0) throw Error("epsilon_geodesic: eps = 0 is degenerate; use exact_geodesic");
  if (!(eps > 0.0)) throw Error("epsilon_geodesic: eps must be positive");
  if (m < 3) throw Error("epsilon_geodesic: need m >= 3");
  const Grid& g = phi0.grid;
  const int n = g.n;
  const double h = g.h;
  const double ds = 1.0 / (m - 1);
  const double am = phi0.slope_minus, ap = phi0.slope_plus;
  Density rho_d = ma_density(phi0, 4);
  const std::vector<double>& rho = rho_d.samples;

  const int N = n * m;
  auto id = [m](int i, int j) { return i * m + j; };
  std::vector<double> Phi(N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      double s = j * ds;
      Phi[id(i, j)] = (1.0 - s) * phi0.samples[i] + s * phi1.samples[i];
    }

  // where the reference density is below resolution the MA operator is
  // degenerate (affine tails); those rows pin the x-curvature to zero instead
  double rho_max = 0;
  for (double r : rho) rho_max = std::max(rho_max, r);
  std::vector<char> tail(n, 0);
  for (int i = 0; i < n; ++i) tail[i] = rho[i] < 1e-10 * rho_max;

  // x-derivative stencils per column (4th order inside, 2nd order near edges)
  auto dxx_stencil = [&](int i, const double*& c, int& reach, double& scale) {
    static const double c2[] = {1, -2, 1};
    static const double c4[] = {-1, 16, -30, 16, -1};
    if (i >= 2 && i <= n - 3) {
      c = c4;
      reach = 2;
      scale = 1.0 / (12 * h * h);
    } else {
      c = c2;
      reach = 1;
      scale = 1.0 / (h * h);
    }
  };
  auto dx_stencil = [&](int i, const double*& c, int& reach, double& scale) {
    static const double c2[] = {-1, 0, 1};
    static const double c4[] = {1, -8, 0, 8, -1};
    if (i >= 2 && i <= n - 3) {
      c = c4;
      reach = 2;
      scale = 1.0 / (12 * h);
    } else {
      c = c2;
      reach = 1;
      scale = 1.0 / (2 * h);
    }
  };

  auto dxx_at = [&](const std::vector<double>& P, int i, int j) {
    const double* c;
    int reach;
    double scale;
    dxx_stencil(i, c, reach, scale);
    double v = 0;
    for (int k = -reach; k <= reach; ++k) v += c[k + reach] * P[id(i + k, j)];
    return v * scale;
  };
  auto dx_at = [&](const std::vector<double>& P, int i, int j) {
    const double* c;
    int reach;
    double scale;
    dx_stencil(i, c, reach, scale);
    double v = 0;
    for (int k = -reach; k <= reach; ++k) v += c[k + reach] * P[id(i + k, j)];
    return v * scale;
  };

  auto residual = [&](const std::vector<double>& P, std::vector<double>& F) {
    F.assign(N, 0.0);
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      F[id(i, 0)] = P[id(i, 0)] - phi0.samples[i];
      F[id(i, m - 1)] = P[id(i, m - 1)] - phi1.samples[i];
    }
    for (int j = 1; j < m - 1; ++j) {
      F[id(0, j)] =
          (-3 * P[id(0, j)] + 4 * P[id(1, j)] - P[id(2, j)]) / (2 * h) - am;
      F[id(n - 1, j)] =
          (3 * P[id(n - 1, j)] - 4 * P[id(n - 2, j)] + P[id(n - 3, j)]) / (2 * h) - ap;
      for (int i = 1; i < n - 1; ++i) {
        if (tail[i]) {
          F[id(i, j)] = dxx_at(P, i, j);
          continue;
        }
        double ss = (P[id(i, j - 1)] - 2 * P[id(i, j)] + P[id(i, j + 1)]) / (ds * ds);
        double xx = dxx_at(P, i, j);
        double sx = (dx_at(P, i, j + 1) - dx_at(P, i, j - 1)) / (2 * ds);
        F[id(i, j)] = ss * xx - sx * sx - eps * rho[i];
      }
    }
    for (double v : F) r = std::max(r, std::abs(v));
    return r;
  };

  const int kl = 2 * m + 1;
  BandedMatrix B(N, kl, kl);
  std::vector<double> F, Ft;
  double res = residual(Phi, F);
  std::vector<double> trace{res};
  bool converged = res <= cfg.tol;
  int iterations = 0;

  for (int it = 0; it < cfg.max_iter && !converged; ++it) {
    B.clear();
    for (int i = 0; i < n; ++i) {
      B.at(id(i, 0), id(i, 0)) = 1.0;
      B.at(id(i, m - 1), id(i, m - 1)) = 1.0;
    }
    for (int j = 1; j < m - 1; ++j) {
      B.at(id(0, j), id(0, j)) = -3 / (2 * h);
      B.at(id(0, j), id(1, j)) = 4 / (2 * h);
      B.at(id(0, j), id(2, j)) = -1 / (2 * h);
      B.at(id(n - 1, j), id(n - 1, j)) = 3 / (2 * h);
      B.at(id(n - 1, j), id(n - 2, j)) = -4 / (2 * h);
      B.at(id(n - 1, j), id(n - 3, j)) = 1 / (2 * h);
      for (int i = 1; i < n - 1; ++i) {
        const int row = id(i, j);
        double ss = (Phi[id(i, j - 1)] - 2 * Phi[id(i, j)] + Phi[id(i, j + 1)]) / (ds * ds);
        double xx = dxx_at(Phi, i, j);
        double sx = (dx_at(Phi, i, j + 1) - dx_at(Phi, i, j - 1)) / (2 * ds);
        // d/dPhi [ss] * xx
        B.add(row, id(i, j - 1), xx / (ds * ds));
        B.add(row, id(i, j), -2 * xx / (ds * ds));
        B.add(row, id(i, j + 1), xx / (ds * ds));
        // ss * d/dPhi [xx]
        {
          const double* c;
          int reach;
          double scale;
          dxx_stencil(i, c, reach, scale);
          for (int k = -reach; k <= reach; ++k)
            B.add(row, id(i + k, j), ss * c[k + reach] * scale);
        }
        // -2 sx * d/dPhi [sx]
        {
          const double* c;
          int reach;
          double scale;
          dx_stencil(i, c, reach, scale);
          for (int k = -reach; k <= reach; ++k) {
            B.add(row, id(i + k, j + 1), -2 * sx * c[k + reach] * scale / (2 * ds));
            B.add(row, id(i + k, j - 1), 2 * sx * c[k + reach] * scale / (2 * ds));
          }
        }
      }
    }
    B.factor();
    std::vector<double> delta(N);
    for (int q = 0; q < N; ++q) delta[q] = -F[q];
    B.solve(delta);

    double lam = 1.0;
    std::vector<double> trial(N);
    double res_t = 0.0;
    for (int halv = 0;; ++halv) {
      for (int q = 0; q < N; ++q) trial[q] = Phi[q] + lam * delta[q];
      res_t = residual(trial, Ft);
      if (res_t < res || halv >= cfg.max_halvings) break;
      lam *= 0.5;
    }
    Phi.swap(trial);
    F.swap(Ft);
    res = res_t;
    trace.push_back(res);
    iterations = it + 1;
    if (res <= cfg.tol) converged = true;
  }
  if (!converged)
    throw SolveFailure("epsilon_geodesic: Newton did not converge, residual=" +
                           std::to_string(res),
                       trace);

  // convexity flags
  for (int j = 1; j < m - 1; ++j)
    for (int i = 1; i < n - 1; ++i) {
      double xx = dxx_at(Phi, i, j);
      if (xx <= 0 && rho[i] > 1e-10)
        throw Error("epsilon_geodesic: loss of convexity at node (" + std::to_string(i) + "," +
                    std::to_string(j) + ")");
    }

  GeodesicPath path;
  path.eps = eps;
  path.times.resize(m);
  path.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    path.times[j] = j * ds;
    RadialWeight w;
    w.grid = g;
    w.slope_minus = am;
    w.slope_plus = ap;
    w.samples.resize(n);
    for (int i = 0; i < n; ++i) w.samples[i] = Phi[id(i, j)];
    path.weights[j] = std::move(w);
  }
  path.weights[0] = phi0;
  path.weights[m - 1] = phi1;
  if (info) {
    info->iterations = iterations;
    info->residual = res;
    info->trace = trace;
  }
  return path;
}

DefectField geodesic_defect(const GeodesicPath& path, double eps, const TwisterSpec* tw) {
  const int m = static_cast<int>(path.weights.size());
  if (m < 3) throw Error("geodesic_defect: need at least 3 times");
  const Grid& g = path.weights[0].grid;
  const int n = g.n;
  const double ds = path.times[1] - path.times[0];
  Density rho_d = ma_density(path.weights[0], 4);

  DefectField out;
  double floor = 0.0;
  out.identity_min = 1e300;
  out.identity_max = -1e300;
  double rho_max = 0.0;
  for (double r : rho_d.samples) rho_max = std::max(rho_max, r);

  for (int j = 1; j < m - 1; ++j) {
    const auto& pm = path.weights[j - 1].samples;
    const auto& pc = path.weights[j].samples;
    const auto& pp = path.weights[j + 1].samples;
    std::vector<double> u(n), acc(n);
    for (int i = 0; i < n; ++i) {
      u[i] = (pp[i] - pm[i]) / (2 * ds);
      acc[i] = (pp[i] - 2 * pc[i] + pm[i]) / (ds * ds);
    }
    auto ux = deriv1(u, g.h);
    auto phixx = deriv2(pc, g.h, 4);
    std::vector<double> tauxx;
    if (tw) {
      std::vector<double> tau(n);
      for (int i = 0; i < n; ++i) tau[i] = pc[i] + tw->weight.samples[i];
      tauxx = deriv2(tau, g.h, 4);
    }
    double phixx_max = 0;
    for (double v : phixx) phixx_max = std::max(phixx_max, v);
    floor = 1e-13 * phixx_max;

    std::vector<double> frow(n), ftrow(n);
    for (int i = 0; i < n; ++i) {
      if (phixx[i] < -1e-8 && rho_d.samples[i] > 1e-10 * rho_max)
        throw Error("geodesic_defect: phi_xx <= 0 at node " + std::to_string(i));
      double quad = (phixx[i] > floor) ? ux[i] * ux[i] / phixx[i] : 0.0;
      frow[i] = acc[i] - quad;
      if (tw) {
        double quad_t = (tauxx[i] > floor) ? ux[i] * ux[i] / tauxx[i] : 0.0;
        ftrow[i] = acc[i] - quad_t;
      } else {
        ftrow[i] = frow[i];
      }
      out.f_sup = std::max(out.f_sup, std::abs(frow[i]));
      if (eps > 0 && rho_d.samples[i] >= 1e-6 * rho_max && i > 0 && i < n - 1) {
        double ratio = frow[i] * phixx[i] / rho_d.samples[i];
        out.identity_min = std::min(out.identity_min, ratio);
        out.identity_max = std::max(out.identity_max, ratio);
      }
    }
    out.times.push_back(path.times[j]);
    out.f.push_back(std::move(frow));
    out.f_tau.push_back(std::move(ftrow));
  }
  return out;
}

std::vector<AuditRow> convexity_audit(const GeodesicPath& path, const TwisterSpec& tw) {
  const int m = static_cast<int>(path.weights.size());
  if (m < 3) throw Error("convexity_audit: need at least 3 times");
  const Grid& g = path.weights[0].grid;
  const int n = g.n;
  const double ds = path.times[1] - path.times[0];
  const double M = tw.mass;
  const RadialWeight& base = path.weights[0];
  const double sm = base.slope_minus + tw.weight.slope_minus;
  const double sp = base.slope_plus + tw.weight.slope_plus;

  std::vector<double> D(m);
  for (int j = 0; j < m; ++j) D[j] = ding_value(path.weights[j], base, tw).D;

  std::vector<AuditRow> rows;
  for (int j = 1; j < m - 1; ++j) {
    const auto& pm = path.weights[j - 1].samples;
    const auto& pc = path.weights[j].samples;
    const auto& pp = path.weights[j + 1].samples;
    std::vector<double> u(n), acc(n), tau(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = (pp[i] - pm[i]) / (2 * ds);
      acc[i] = (pp[i] - 2 * pc[i] + pm[i]) / (ds * ds);
      tau[i] = pc[i] + tw.weight.samples[i];
      v[i] = std::exp(-tau[i]);
    }
    auto ux = deriv1(u, g.h);
    auto phixx = deriv2(pc, g.h, 4);
    auto tauxx = deriv2(tau, g.h, 4);
    double phixx_max = 0;
    for (double w : phixx) phixx_max = std::max(phixx_max, w);
    double floor = 1e-13 * phixx_max;

    double Q = exp_quadrature(v, g, sm, sp);
    double tl = v.front() / (-sm), tr = v.back() / sp;

    // quadratures of the decomposition pieces
    std::vector<double> a_int(n), b_int(n), ub_int(n), k_int(n), f_int(n), e_int(n);
    std::vector<double> frow(n);
    for (int i = 0; i < n; ++i) {
      double quad_phi = (phixx[i] > floor) ? ux[i] * ux[i] / phixx[i] : 0.0;
      double quad_tau = (tauxx[i] > floor) ? ux[i] * ux[i] / tauxx[i] : 0.0;
      frow[i] = acc[i] - quad_phi;
      a_int[i] = quad_tau * v[i];
      b_int[i] = u[i] * u[i] * v[i];
      ub_int[i] = u[i] * v[i];
      k_int[i] = (quad_phi - quad_tau) * v[i];
      f_int[i] = frow[i] * v[i];
      e_int[i] = frow[i] * phixx[i];
    }
    double a_q = trapezoid(a_int, g.h);
    double b_q = trapezoid(b_int, g.h) + u.front() * u.front() * tl + u.back() * u.back() * tr;
    double mean = (trapezoid(ub_int, g.h) + u.front() * tl + u.back() * tr) / Q;
    double delta = a_q - (b_q - Q * mean * mean);
    double k_q = trapezoid(k_int, g.h);
    double f_w = (trapezoid(f_int, g.h) + frow.front() * tl + frow.back() * tr) / Q;
    double gap_plus = base.slope_plus - path.weights[j].edge_slope_right();
    double gap_minus = path.weights[j].edge_slope_left() - base.slope_minus;
    double e2 = (trapezoid(e_int, g.h) + frow.back() * gap_plus + frow.front() * gap_minus) / M;

    AuditRow row;
    row.s = path.times[j];
    row.D = D[j];
    row.D_second = (D[j + 1] - 2 * D[j] + D[j - 1]) / (ds * ds);
    row.delta_tau = delta;
    row.k_term = k_q;
    row.f_weighted = f_w;
    row.E_second = e2;
    row.assembled = -e2 + (delta + k_q) / Q + f_w;
    rows.push_back(row);
  }
  return rows;
}

void write_audit_csv(const std::vector<AuditRow>& rows, std::ostream& os) {
  os << "s,D,D2,delta_tau,k,f_weighted,E2\n";
  for (const auto& r : rows)
    os << fmtg(r.s) << ',' << fmtg(r.D) << ',' << fmtg(r.D_second) << ',' << fmtg(r.delta_tau)
       << ',' << fmtg(r.k_term) << ',' << fmtg(r.f_weighted) << ',' << fmtg(r.E_second) << '\n';
}

} // namespace radke
