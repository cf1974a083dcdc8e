#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radke/error.hpp"
#include "radke/functionals.hpp"
#include "radke/geodesics.hpp"

#include <cmath>

using namespace radke;

namespace {
Grid g() { return build_grid(40.0, 4097); }
const double kLog2 = std::log(2.0);

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
} // namespace

TEST_CASE("legendre_dual closed forms") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  LegendreDual d = legendre_dual(fs, 513);
  // f*(0) = -min f = -2 log 2
  int mid = 256;
  CHECK(d.p[mid] == doctest::Approx(0.0));
  CHECK(d.samples[mid] == doctest::Approx(-2 * kLog2).epsilon(1e-12));
  // endpoints carry the tail offsets
  CHECK(std::abs(d.samples.front()) < 1e-12);
  CHECK(std::abs(d.samples.back()) < 1e-12);

  // shift rule (phi + c)* = phi* - c
  LegendreDual dc = legendre_dual(shift_weight(fs, 1.5), 513);
  for (int k = 0; k < 513; k += 64)
    CHECK(dc.samples[k] == doctest::Approx(d.samples[k] - 1.5).epsilon(1e-12));

  CHECK_THROWS_AS(legendre_dual(affine_weight(0.0, 1.0, gr)), Error);
}

TEST_CASE("legendre involution recovers the weight") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  LegendreDual d = legendre_dual(fs);
  auto back = legendre_dual_inverse(d, gr);
  double lip = std::max(std::abs(fs.slope_minus), std::abs(fs.slope_plus));
  double bound = 2 * (fs.slope_plus - fs.slope_minus) / (gr.n - 1) * lip +
                 2 * gr.h * lip; // 2h-Lipschitz style slack
  CHECK(sup_diff(back, fs.samples) < std::max(bound, 1e-4));
}

TEST_CASE("exact_geodesic: linear path for constant-shifted endpoints") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight fs2 = shift_weight(fs, 2.0);
  GeodesicPath path = exact_geodesic(fs, fs2, 9);
  for (int j = 0; j < 9; ++j) {
    double s = path.times[j];
    double worst = 0;
    for (int i = 0; i < gr.n; i += 64)
      worst = std::max(worst,
                       std::abs(path.weights[j].samples[i] - (fs.samples[i] + 2.0 * s)));
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("exact_geodesic: automorphism orbit") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight tr = translate_weight(fs, 2.0);
  GeodesicPath path = exact_geodesic(fs, tr, 9);
  for (int j = 1; j < 8; ++j) {
    double s = path.times[j];
    RadialWeight expect = translate_weight(fs, 2.0 * s);
    double worst = 0;
    for (int i = 0; i < gr.n; i += 64)
      worst = std::max(worst, std::abs(path.weights[j].samples[i] - expect.samples[i]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("exact_geodesic: endpoints are bitwise, slope mismatch rejected") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight bump = add_sech_bump(fs, 0.3, 0.0);
  GeodesicPath path = exact_geodesic(fs, bump, 17);
  CHECK(path.weights.front().samples == fs.samples);
  CHECK(path.weights.back().samples == bump.samples);
  CHECK_THROWS_AS(exact_geodesic(fs, football_weight(0.5, gr), 9), Error);
}

TEST_CASE("exact_geodesic defect is small") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight bump = add_sech_bump(fs, 0.3, 0.0);
  GeodesicPath path = exact_geodesic(fs, bump, 65);
  DefectField def = geodesic_defect(path, 0.0);
  CHECK(def.f_sup <= 5e-4);
}

TEST_CASE("geodesic_defect: constant path has zero defect") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  GeodesicPath path;
  path.eps = 0.0;
  for (int j = 0; j < 5; ++j) {
    path.times.push_back(j / 4.0);
    path.weights.push_back(fs);
  }
  DefectField def = geodesic_defect(path, 0.0);
  CHECK(def.f_sup < 1e-12);
}

TEST_CASE("epsilon_geodesic basics on a coarse grid") {
  Grid gr = build_grid(40.0, 513);
  RadialWeight fs = fubini_study_weight(gr);
  SolverConfig cfg;
  cfg.tol = 1e-9;

  CHECK_THROWS_AS(epsilon_geodesic(fs, fs, 0.0, cfg, 9), Error);

  // constant-shift endpoints: the exact path is linear; the eps-path is
  // within O(eps) of it
  RadialWeight fs1 = shift_weight(fs, 1.0);
  GeodesicPath path = epsilon_geodesic(fs, fs1, 1e-3, cfg, 17);
  double worst = 0;
  for (int j = 0; j < 17; ++j) {
    double s = path.times[j];
    for (int i = 0; i < gr.n; ++i)
      worst = std::max(worst,
                       std::abs(path.weights[j].samples[i] - (fs.samples[i] + s)));
  }
  CHECK(worst < 2e-3);

  // residual identity f phi_xx = eps rho on the safe window
  DefectField def = geodesic_defect(path, 1e-3);
  CHECK(def.identity_min >= 0.99e-3);
  CHECK(def.identity_max <= 1.01e-3);
}

TEST_CASE("epsilon_geodesic halving ratio") {
  Grid gr = build_grid(40.0, 1025);
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight bump = add_sech_bump(fs, 0.25, 0.7);
  SolverConfig cfg;
  cfg.tol = 1e-9;
  const int m = 33;
  GeodesicPath exact = exact_geodesic(fs, bump, m);
  auto dist = [&](double eps) {
    GeodesicPath p = epsilon_geodesic(fs, bump, eps, cfg, m);
    double worst = 0;
    for (int j = 0; j < m; ++j)
      worst = std::max(worst, sup_diff(p.weights[j].samples, exact.weights[j].samples));
    return worst;
  };
  double d1 = dist(1e-2), d2 = dist(5e-3);
  double ratio = d1 / d2;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);
}

TEST_CASE("convexity audit along exact geodesics") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight bump = add_sech_bump(fs, 0.25, 0.4);
  GeodesicPath path = exact_geodesic(fs, bump, 65);
  TwisterSpec none = TwisterSpec::none(gr);
  auto rows = convexity_audit(path, none);
  REQUIRE(rows.size() == 63);
  for (const auto& r : rows) {
    CHECK(r.D_second >= -1e-6);
    CHECK(std::abs(r.D_second - r.assembled) <= 1e-4);
    CHECK(std::abs(r.k_term) < 1e-12); // tau = phi when the twister is zero
  }
}

TEST_CASE("audit along the automorphism orbit: flat Ding, Futaki equality") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  GeodesicPath path = exact_geodesic(fs, translate_weight(fs, 1.5), 65);
  auto rows = convexity_audit(path, TwisterSpec::none(gr));
  double dmax = 0;
  for (const auto& r : rows) {
    CHECK(std::abs(r.D_second) <= 1e-6);
    CHECK(r.delta_tau <= 1e-7);
    dmax = std::max(dmax, std::abs(r.D - rows.front().D));
  }
  CHECK(dmax <= 1e-6);
}

TEST_CASE("audit with a convex twister: nonnegative k") {
  Grid gr = g();
  TwisterSpec tw = TwisterSpec::smooth_background(0.5, gr);
  RadialWeight base = scale_weight(fubini_study_weight(gr), 0.5);
  RadialWeight bump = add_sech_bump(base, 0.1, -0.6);
  GeodesicPath path = exact_geodesic(base, bump, 33);
  auto rows = convexity_audit(path, tw);
  for (const auto& r : rows) {
    CHECK(r.k_term >= -1e-10);
    CHECK(std::abs(r.D_second - r.assembled) <= 1e-4);
  }
}

TEST_CASE("eps family: defect mass is O(eps)") {
  Grid gr = build_grid(40.0, 1025);
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight bump = add_sech_bump(fs, 0.25, 0.7);
  SolverConfig cfg;
  cfg.tol = 1e-9;
  const int m = 17;
  TwisterSpec none = TwisterSpec::none(gr);
  auto total = [&](double eps) {
    GeodesicPath p = epsilon_geodesic(fs, bump, eps, cfg, m);
    auto rows = convexity_audit(p, none);
    // int over space-time of (f + delta + k) e^{-tau}
    double s = 0;
    for (size_t r = 0; r < rows.size(); ++r) {
      double Q = std::exp(-functional_F(p.weights[r + 1], none));
      s += rows[r].f_weighted * Q + rows[r].delta_tau + rows[r].k_term;
    }
    return s / (m - 1);
  };
  double i1 = total(1e-2), i2 = total(5e-3), i3 = total(2.5e-3);
  // linear fit through the smaller values predicts the largest
  double slope = (i2 - i3) / (5e-3 - 2.5e-3);
  double pred = i3 + slope * (1e-2 - 2.5e-3);
  CHECK(i1 <= 2.5 * std::max(pred, 1e-14));
  CHECK(i1 > 0);
}
