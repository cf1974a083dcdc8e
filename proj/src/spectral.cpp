#include "radke/spectral.hpp"
#include "radke/banded.hpp"
#include "radke/density.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

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

// Sturm count: number of pencil eigenvalues below lambda.
int sturm_count(const WeightedForms& W, double lambda) {
  const int n = static_cast<int>(W.a_diag.size());
  int count = 0;
  double d = W.a_diag[0] - lambda * W.b_diag[0];
  if (d == 0) d = -1e-300;
  if (d < 0) ++count;
  for (int i = 1; i < n; ++i) {
    double e = W.a_off[i - 1];
    d = (W.a_diag[i] - lambda * W.b_diag[i]) - e * e / d;
    if (d == 0) d = -1e-300;
    if (d < 0) ++count;
  }
  return count;
}

double bisect_eigenvalue(const WeightedForms& W, int index_one_based, double lo, double hi) {
  // smallest lambda with count(lambda+) >= index
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(W, mid) >= index_one_based)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-13 * (1.0 + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double WeightedForms::a_value(const std::vector<double>& u) const {
  const int n = static_cast<int>(u.size());
  double s = 0;
  for (int i = 0; i < n; ++i) {
    double r = a_diag[i] * u[i];
    if (i > 0) r += a_off[i - 1] * u[i - 1];
    if (i + 1 < n) r += a_off[i] * u[i + 1];
    s += u[i] * r;
  }
  return s;
}

double WeightedForms::b_value(const std::vector<double>& u) const {
  double s = 0;
  for (size_t i = 0; i < u.size(); ++i) s += b_diag[i] * u[i] * u[i];
  return s;
}

double WeightedForms::b_inner(const std::vector<double>& u, const std::vector<double>& v) const {
  double s = 0;
  for (size_t i = 0; i < u.size(); ++i) s += b_diag[i] * u[i] * v[i];
  return s;
}

WeightedForms weighted_laplacian_form(const RadialWeight& tau) {
  const Grid& g = tau.grid;
  const int n = g.n;
  if (!(tau.slope_minus < 0 && tau.slope_plus > 0))
    throw Error("weighted_laplacian_form: e^{-tau} not integrable");
  auto tauxx = deriv2(tau.samples, g.h, 4);
  for (int i = 1; i + 1 < n; ++i)
    if (!(tauxx[i] > 0))
      throw Error("weighted_laplacian_form: tau'' <= 0 at node " + std::to_string(i));
  WeightedForms W;
  W.grid = g;
  W.a_diag.assign(n, 0.0);
  W.a_off.assign(n - 1, 0.0);
  W.b_diag.assign(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    double tau_mid = 0.5 * (tau.samples[i] + tau.samples[i + 1]);
    double txx_mid = 0.5 * (std::max(tauxx[i], 0.0) + std::max(tauxx[i + 1], 0.0));
    if (!(txx_mid > 0)) txx_mid = 1e-300;
    double c = std::exp(-tau_mid) / txx_mid / g.h;
    W.a_diag[i] += c;
    W.a_diag[i + 1] += c;
    W.a_off[i] -= c;
  }
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = std::exp(-tau.samples[i]);
  for (int i = 0; i < n; ++i) W.b_diag[i] = g.h * v[i];
  W.b_diag[0] = 0.5 * g.h * v[0] + v[0] / (-tau.slope_minus);
  W.b_diag[n - 1] = 0.5 * g.h * v[n - 1] + v[n - 1] / tau.slope_plus;
  W.volume = 0;
  for (int i = 0; i < n; ++i) W.volume += W.b_diag[i];
  return W;
}

std::vector<SpectralPair> lowest_spectrum(const RadialWeight& tau, int count) {
  if (count < 1) throw Error("lowest_spectrum: count must be >= 1");
  WeightedForms W = weighted_laplacian_form(tau);
  const int n = static_cast<int>(W.a_diag.size());
  for (int i = 0; i < n; ++i)
    if (!(W.b_diag[i] > 0)) throw Error("lowest_spectrum: non-positive mass entry");

  // bracket enough of the low spectrum (the zero mode plus `count` more)
  double hi = 16.0;
  while (sturm_count(W, hi) < count + 1 && hi < 1e18) hi *= 4.0;

  std::vector<SpectralPair> out;
  std::vector<double> lambdas;
  for (int k = 1; k <= count + 1 && static_cast<int>(out.size()) < count; ++k) {
    double lam = bisect_eigenvalue(W, k, -1.0, hi);
    lambdas.push_back(lam);
    if (std::abs(lam) <= 1e-8) continue; // constants: exact kernel, deflated

    // inverse iteration on the shifted pencil
    double shift = lam - std::max(1e-10, 1e-8 * std::abs(lam));
    std::vector<double> u(n);
    const Grid& g = tau.grid;
    for (int i = 0; i < n; ++i) {
      double x = g.node(i);
      u[i] = x + 0.05 * x * x + (k % 2 ? 0.0 : 1.0);
    }
    for (int it = 0; it < 6; ++it) {
      std::vector<double> rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = W.b_diag[i] * u[i];
      std::vector<double> dl(W.a_off), du(W.a_off), dd(n);
      for (int i = 0; i < n; ++i) dd[i] = W.a_diag[i] - shift * W.b_diag[i];
      solve_tridiag(dl, dd, du, rhs);
      u = rhs;
      // deflate constants and b-normalize
      double mean = 0;
      for (int i = 0; i < n; ++i) mean += W.b_diag[i] * u[i];
      mean /= W.volume;
      for (int i = 0; i < n; ++i) u[i] -= mean;
      double nb = std::sqrt(W.b_value(u));
      if (!(nb > 0)) throw Error("lowest_spectrum: inverse iteration degenerated");
      for (int i = 0; i < n; ++i) u[i] /= nb;
    }
    SpectralPair sp;
    sp.u = u;
    double a = W.a_value(u), b = W.b_value(u);
    sp.lambda = a / b;
    sp.rayleigh_residual = std::abs(a / b - lam);
    out.push_back(std::move(sp));
  }
  if (static_cast<int>(out.size()) < count)
    throw Error("lowest_spectrum: could not isolate the requested eigenvalues");
  return out;
}

namespace {

struct NodalData {
  std::vector<double> v;      // e^{-tau}
  std::vector<double> tauxx;  // 4th-order
  double Q = 0, tl = 0, tr = 0, floor = 0;
};

NodalData nodal_data(const RadialWeight& tau) {
  const Grid& g = tau.grid;
  NodalData nd;
  nd.v.resize(g.n);
  for (int i = 0; i < g.n; ++i) nd.v[i] = std::exp(-tau.samples[i]);
  nd.tauxx = deriv2(tau.samples, g.h, 4);
  double mx = 0;
  for (double t : nd.tauxx) mx = std::max(mx, t);
  nd.floor = 1e-13 * mx;
  nd.tl = nd.v.front() / (-tau.slope_minus);
  nd.tr = nd.v.back() / tau.slope_plus;
  nd.Q = trapezoid(nd.v, g.h) + nd.tl + nd.tr;
  return nd;
}

} // namespace

double delta_tau(const RadialWeight& tau, const std::vector<double>& u) {
  const Grid& g = tau.grid;
  if (static_cast<int>(u.size()) != g.n) throw Error("delta_tau: size mismatch");
  NodalData nd = nodal_data(tau);
  auto ux = deriv1(u, g.h);
  std::vector<double> a_int(g.n), b_int(g.n), m_int(g.n);
  for (int i = 0; i < g.n; ++i) {
    a_int[i] = (nd.tauxx[i] > nd.floor) ? ux[i] * ux[i] / nd.tauxx[i] * nd.v[i] : 0.0;
    b_int[i] = u[i] * u[i] * nd.v[i];
    m_int[i] = u[i] * nd.v[i];
  }
  double a = trapezoid(a_int, g.h);
  double b = trapezoid(b_int, g.h) + u.front() * u.front() * nd.tl + u.back() * u.back() * nd.tr;
  double mean = (trapezoid(m_int, g.h) + u.front() * nd.tl + u.back() * nd.tr) / nd.Q;
  return a - (b - nd.Q * mean * mean);
}

double k_gap(const RadialWeight& phi, const RadialWeight& tau, const std::vector<double>& u) {
  const Grid& g = phi.grid;
  if (!(g == tau.grid) || static_cast<int>(u.size()) != g.n) throw Error("k_gap: size mismatch");
  auto phixx = deriv2(phi.samples, g.h, 4);
  NodalData nd = nodal_data(tau);
  double mx = 0;
  for (double t : phixx) mx = std::max(mx, t);
  double floor = 1e-13 * mx;
  for (int i = 1; i + 1 < g.n; ++i)
    if (phixx[i] > floor && nd.tauxx[i] - phixx[i] < -1e-10 * mx)
      throw Error("k_gap: tau'' < phi'' at node " + std::to_string(i) +
                  " (twister weight not convex)");
  auto ux = deriv1(u, g.h);
  std::vector<double> k_int(g.n);
  for (int i = 0; i < g.n; ++i) {
    double qp = (phixx[i] > floor) ? ux[i] * ux[i] / phixx[i] : 0.0;
    double qt = (nd.tauxx[i] > nd.floor) ? ux[i] * ux[i] / nd.tauxx[i] : 0.0;
    k_int[i] = (qp - qt) * nd.v[i];
  }
  return trapezoid(k_int, g.h);
}

FieldReport extract_field(const std::vector<double>& phi_dot, const RadialWeight& tau) {
  const Grid& g = tau.grid;
  if (static_cast<int>(phi_dot.size()) != g.n) throw Error("extract_field: size mismatch");
  NodalData nd = nodal_data(tau);
  auto px = deriv1(phi_dot, g.h);
  double vmax = 0;
  for (double v : nd.v) vmax = std::max(vmax, v);
  double num = 0, den = 0;
  std::vector<char> valid(g.n, 0);
  std::vector<double> w(g.n, 0.0);
  for (int i = 0; i < g.n; ++i) {
    if (nd.tauxx[i] > nd.floor) {
      valid[i] = 1;
      w[i] = px[i] / nd.tauxx[i];
      double wt = (i == 0 || i == g.n - 1 ? 0.5 : 1.0) * g.h * nd.v[i];
      num += w[i] * wt;
      den += wt;
    }
  }
  FieldReport rep;
  rep.c = den > 0 ? num / den : 0.0;
  for (int i = 0; i < g.n; ++i)
    if (valid[i]) rep.defect = std::max(rep.defect, std::abs(w[i] - rep.c) * nd.v[i] / vmax);
  return rep;
}

std::string twister_kernel_check(const FieldReport& field, const TwisterSpec& tw) {
  double sup = 0;
  for (double c : tw.chi.samples) sup = std::max(sup, std::abs(field.c * c));
  if (sup <= 1e-10) return "field annihilates twister";
  int run = 0;
  for (double c : tw.chi.samples) {
    run = (c > 1e-8) ? run + 1 : 0;
    if (run >= 5) return "contradiction: field must vanish";
  }
  return "inconclusive";
}

void write_spectrum_csv(const std::vector<SpectralPair>& spec, std::ostream& os) {
  os << "index,lambda,rayleigh_residual\n";
  for (size_t i = 0; i < spec.size(); ++i)
    os << (i + 1) << ',' << fmtg(spec[i].lambda) << ',' << fmtg(spec[i].rayleigh_residual)
       << '\n';
}

} // namespace radke
