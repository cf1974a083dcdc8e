#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radke/error.hpp"
#include "radke/fd.hpp"
#include "radke/functionals.hpp"
#include "radke/twister.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace radke;

namespace {
Grid g() { return build_grid(40.0, 4097); }
const double kLog2 = std::log(2.0);
} // namespace

TEST_CASE("energy_E closed forms") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  CHECK(energy_E(fs, fs) == 0.0);
  RadialWeight fs1 = shift_weight(fs, 1.0);
  CHECK(energy_E(fs1, fs) == doctest::Approx(2.0).epsilon(1e-10));
  RadialWeight fb = football_weight(0.5, gr);
  CHECK(energy_E(shift_weight(fb, 1.0), fb) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(energy_E(fs, fb), Error); // degree mismatch
}

TEST_CASE("energy shift identity at low-degree weights") {
  // E(phi + c) - E(phi) = c * M must hold to round-off even for beta = 1/4,
  // where the curvature tails beyond the grid are not negligible
  Grid gr = g();
  RadialWeight fb = football_weight(0.25, gr);
  RadialWeight pert = add_sech_bump(fb, 0.02, 0.7);
  double e0 = energy_E(pert, fb);
  double e1 = energy_E(shift_weight(pert, 3.0), fb);
  CHECK(e1 - e0 == doctest::Approx(3.0 * 0.5).epsilon(1e-9));
}

TEST_CASE("functional_F closed forms") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  TwisterSpec none = TwisterSpec::none(gr);
  CHECK(std::abs(functional_F(fs, none)) < 1e-12);

  RadialWeight fb = football_weight(0.5, gr);
  TwisterSpec con = TwisterSpec::conical(0.5, gr);
  CHECK(functional_F(fb, con) == doctest::Approx(-kLog2).epsilon(1e-10));

  for (double c : {-3.0, 1.0, 10.0})
    CHECK(functional_F(shift_weight(fs, c), none) - functional_F(fs, none) ==
          doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("ding normalization invariance") {
  Grid gr = g();
  TwisterSpec con = TwisterSpec::conical(0.25, gr);
  RadialWeight fb = football_weight(0.25, gr);
  RadialWeight phi = add_sech_bump(fb, 0.02, -0.5);
  double d0 = ding_value(phi, fb, con).D;
  for (double c : {-3.0, 1.0, 10.0}) {
    double dc = ding_value(shift_weight(phi, c), fb, con).D;
    CHECK(std::abs(dc - d0) <= 1e-9 * (1.0 + std::abs(c)));
  }
}

TEST_CASE("ding at the critical point") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  FunctionalReport r = ding_value(fs, fs, TwisterSpec::none(gr));
  CHECK(std::abs(r.D) < 1e-12);
  CHECK(r.D == -r.E / r.mass + r.F);
  CHECK(r.J >= -1e-10);
}

TEST_CASE("ding monotone in eps, conical is the floor") {
  Grid gr = g();
  RadialWeight fb = football_weight(0.5, gr);
  RadialWeight phi = add_sech_bump(fb, 0.1, 0.3);
  double prev = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    TwisterSpec tw = TwisterSpec::smoothed_cone(0.5, eps, gr);
    double d = ding_value(phi, fb, tw).D;
    CHECK(d <= prev + 1e-10);
    prev = d;
  }
  TwisterSpec con = TwisterSpec::conical(0.5, gr);
  CHECK(ding_value(phi, fb, con).D <= prev + 1e-10);
}

TEST_CASE("energy cocycle") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight b0 = fs;
  RadialWeight b1 = add_sech_bump(fs, 0.2, 1.0);
  std::mt19937_64 rng(3);
  double ref = 0;
  for (int k = 0; k < 3; ++k) {
    double c = 0.05 + 0.05 * k;
    RadialWeight phi = add_sech_bump(fs, c, -1.0 + k);
    double diff = energy_E(phi, b0) - energy_E(phi, b1);
    if (k == 0)
      ref = diff;
    else
      CHECK(diff == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("aubin_J basics") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  CHECK(aubin_J(fs, fs) == 0.0);
  CHECK(std::abs(aubin_J(shift_weight(fs, 2.5), fs)) < 1e-10);
  RadialWeight tr = translate_weight(fs, 2.0);
  CHECK(aubin_J(tr, fs) > 0.01);
}

TEST_CASE("ding_first_variation vanishes at the known solutions") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  Density fv = ding_first_variation(fs, TwisterSpec::none(gr));
  double sup = 0;
  for (double v : fv.samples) sup = std::max(sup, std::abs(v));
  CHECK(sup < 1e-8);

  RadialWeight fb = football_weight(0.5, gr);
  Density fv2 = ding_first_variation(fb, TwisterSpec::conical(0.5, gr));
  sup = 0;
  for (double v : fv2.samples) sup = std::max(sup, std::abs(v));
  CHECK(sup < 1e-8);

  // off-solution direction: nonzero density with zero mean
  RadialWeight pert = add_sech_bump(fs, 0.2, 0.0);
  Density fv3 = ding_first_variation(pert, TwisterSpec::none(gr));
  sup = 0;
  for (double v : fv3.samples) sup = std::max(sup, std::abs(v));
  CHECK(sup > 1e-4);
  CHECK(std::abs(fv3.mass) < 1e-6);
}

TEST_CASE("first variation matches central differences (ratio test)") {
  Grid gr = g();
  RadialWeight fs = fubini_study_weight(gr);
  RadialWeight phi = add_sech_bump(fs, 0.15, 0.5);
  TwisterSpec tw = TwisterSpec::smooth_background(0.5, gr);
  RadialWeight phi_s = scale_weight(phi, 0.5); // slopes match mass/2 = 0.5
  Density fv = ding_first_variation(phi_s, tw);

  // direction: a bounded bump, paired through the measure-free integrand
  auto dir_profile = [gr](double amp) {
    RadialWeight v = affine_weight(0.0, 0.0, gr);
    for (int i = 0; i < gr.n; ++i) v.samples[i] = amp / std::cosh(gr.node(i) - 0.4);
    return v;
  };
  RadialWeight v = dir_profile(1.0);
  // the density is oriented as the Einstein discrepancy (1/M) phi'' - e^{-tau}/Q,
  // so the Ding derivative along v is the negated pairing
  std::vector<double> f(gr.n);
  for (int i = 0; i < gr.n; ++i) f[i] = fv.samples[i] * v.samples[i];
  double pairing = -trapezoid(f, gr.h);

  RadialWeight base = phi_s;
  auto D_at = [&](double h) {
    RadialWeight p = phi_s;
    for (int i = 0; i < gr.n; ++i) p.samples[i] += h * v.samples[i];
    p.profile.reset();
    return ding_value(p, base, tw).D;
  };
  double h1 = 1e-3;
  double fd1 = (D_at(h1) - D_at(-h1)) / (2 * h1);
  double fd2 = (D_at(h1 / 2) - D_at(-h1 / 2)) / h1;
  double err1 = std::abs(fd1 - pairing), err2 = std::abs(fd2 - pairing);
  CHECK(err2 > 0);
  double ratio = err1 / err2;
  CHECK(ratio > 4.0 * 0.8);
  CHECK(ratio < 4.0 * 1.2);
}

TEST_CASE("properness scan: translation orbit vs coercive family") {
  Grid gr = g();
  RadialWeight fb = football_weight(0.5, gr);
  TwisterSpec con = TwisterSpec::conical(0.5, gr);
  std::vector<RadialWeight> orbit;
  for (double a : {0.0, 2.0, 4.0, 8.0}) orbit.push_back(translate_weight(fb, a));
  PropernessTable t = properness_scan(orbit, fb, con);
  CHECK(t.verdict == "properness violated");

  TwisterSpec smooth = TwisterSpec::smooth_background(0.5, gr);
  RadialWeight base = scale_weight(fubini_study_weight(gr), 0.5);
  std::vector<RadialWeight> fam{base};
  fam.push_back(add_sech_bump(base, 0.1, 0.8));
  fam.push_back(add_sech_bump(base, 0.12, -1.1));
  for (double a : {0.5, 1.0, 2.0, 3.0}) fam.push_back(translate_weight(base, a));
  fam.push_back(translate_weight(add_sech_bump(base, 0.15, 0.3), 1.5));
  PropernessTable t2 = properness_scan(fam, base, smooth);
  CHECK(t2.verdict == "coercive-consistent");

  std::vector<RadialWeight> tiny{fb};
  CHECK_THROWS_AS(properness_scan(tiny, fb, con), Error);

  std::ostringstream os;
  write_properness_csv(t, os);
  CHECK(os.str().find("member,J,D") == 0);
  CHECK(os.str().find("# verdict=properness violated") != std::string::npos);
}

TEST_CASE("twister specs: smoothing profile") {
  Grid gr = g();
  TwisterSpec tw = smoothing_profile(0.5, 0.01, gr);
  CHECK(tw.kind == TwisterKind::SmoothedCone);
  // chi(0) = 2 eps / (1 + 4 eps)
  CHECK(tw.chi.samples[gr.mid()] == doctest::Approx(0.02 / 1.04).epsilon(1e-14));
  double chi_min = 1e300;
  for (double c : tw.chi.samples) chi_min = std::min(chi_min, c);
  CHECK(chi_min >= -1e-12);
  CHECK(tw.mass == 1.0);
  CHECK(std::abs(tw.chi.mass * (1.0 - 0.5) + tw.mass - 2.0) < 1e-9);

  TwisterSpec cone = smoothing_profile(0.5, 0.0, gr);
  CHECK(cone.kind == TwisterKind::Conical);
  CHECK(cone.mass == 1.0);
  for (double v : cone.weight.samples) CHECK(v == 0.0);

  CHECK_THROWS_AS(smoothing_profile(1.5, 0.01, gr), Error);
  CHECK_THROWS_AS(smoothing_profile(0.5, -1e-3, gr), Error);
}

TEST_CASE("lemma positivity of the smoothed twister") {
  Grid gr = g();
  for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double eps : {1e-4, 1e-3, 1e-2, 1e-1}) {
      TwisterSpec tw = TwisterSpec::smoothed_cone(beta, eps, gr);
      for (double c : tw.chi.samples) CHECK(c >= -1e-12);
    }
}
