#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radke/density.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"
#include "radke/grid.hpp"
#include "radke/radial_weight.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

using namespace radke;

namespace {
const double kLog2 = std::log(2.0);

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
} // namespace

TEST_CASE("build_grid basics") {
  Grid g = build_grid(40.0, 4097);
  CHECK(g.h == doctest::Approx(80.0 / 4096).epsilon(1e-15));
  CHECK(g.node(g.mid()) == 0.0);
  CHECK(g.node(0) == -g.node(g.n - 1));

  Grid g2 = build_grid(10.0, 129);
  CHECK(g2.node(g2.mid()) == 0.0);

  CHECK_THROWS_AS(build_grid(40.0, 4096), Error); // even n
  CHECK_THROWS_AS(build_grid(40.0, 127), Error);
  CHECK_THROWS_AS(build_grid(9.0, 4097), Error);
}

TEST_CASE("grid nodes symmetric and uniform") {
  Grid g = build_grid(17.3, 513);
  auto x = g.nodes();
  for (int i = 0; i < g.n; ++i) CHECK(x[i] == -x[g.n - 1 - i]);
  for (int i = 0; i + 1 < g.n; ++i) CHECK(x[i + 1] - x[i] == doctest::Approx(g.h).epsilon(1e-13));
}

TEST_CASE("canonical weights: closed forms") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  CHECK(fs.samples[g.mid()] == doctest::Approx(2.0 * kLog2).epsilon(1e-14));
  CHECK(fs.slope_minus == -1.0);
  CHECK(fs.slope_plus == 1.0);
  CHECK(fs.degree() == 2.0);

  RadialWeight fb = football_weight(0.5, g);
  CHECK(fb.slope_minus == -0.5);
  CHECK(fb.slope_plus == 0.5);
  CHECK(fb.degree() == 1.0);

  // football(beta) -> fubini_study pointwise as beta -> 1 (same formula)
  RadialWeight fb99 = football_weight(0.999999, g);
  double worst = 0;
  for (int i = 0; i < g.n; i += 128)
    worst = std::max(worst, std::abs(fb99.samples[i] - fs.samples[i]));
  CHECK(worst < 1e-4);

  CHECK_THROWS_AS(football_weight(1.5, g), Error);
  CHECK_THROWS_AS(football_weight(0.0, g), Error);
}

TEST_CASE("ma_density closed forms and mass") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  Density d = ma_density(fs);
  CHECK(d.samples[g.mid()] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(d.mass == doctest::Approx(2.0).epsilon(1e-10));

  Density db = ma_density(football_weight(0.5, g));
  CHECK(db.samples[g.mid()] == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(db.mass == doctest::Approx(1.0).epsilon(1e-10));

  Density da = ma_density(affine_weight(1.0, 0.0, g));
  CHECK(std::abs(da.mass) < 1e-12);
  for (double v : da.samples) CHECK(std::abs(v) < 1e-12);

  // non-convex input flagged
  RadialWeight bad = fs;
  bad.samples[2000] += 0.5;
  bad.profile.reset();
  CHECK_THROWS_AS(ma_density(bad), Error);
}

TEST_CASE("ma_density mass equals degree across weights") {
  Grid g = build_grid(40.0, 4097);
  for (double beta : {0.25, 0.5, 0.75}) {
    Density d = ma_density(football_weight(beta, g));
    CHECK(std::abs(d.mass - 2.0 * beta) < 1e-8 * (1.0 + 2.0 * beta));
  }
  RadialWeight bumped = add_sech_bump(fubini_study_weight(g), 0.3, 0.0);
  CHECK(std::abs(ma_density(bumped).mass - 2.0) < 1e-8 * 3.0);
}

TEST_CASE("ma_density invariant under affine shifts at interior nodes") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  RadialWeight shifted = add_weights(fs, affine_weight(0.5, 0.25, g));
  Density d0 = ma_density(fs);
  Density d1 = ma_density(shifted, 6);
  double worst = 0;
  for (int i = 1; i + 1 < g.n; ++i) worst = std::max(worst, std::abs(d0.samples[i] - d1.samples[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("volume_density masses") {
  Grid g = build_grid(40.0, 4097);
  CHECK(volume_density(fubini_study_weight(g)).mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(volume_density(football_weight(0.5, g)).mass == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(volume_density(affine_weight(1.0, 0.0, g)), Error);
}

TEST_CASE("volume mass invariant under grid-shift translation") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  double m0 = volume_density(fs).mass;
  RadialWeight tr = translate_weight(fs, 8 * g.h);
  CHECK(std::abs(volume_density(tr).mass - m0) < 1e-8);
}

TEST_CASE("ricci_density: Einstein identity for Fubini-Study") {
  Grid g = build_grid(40.0, 8193);
  RadialWeight fs = fubini_study_weight(g);
  Density ric = ricci_density(fs);
  Density ma = ma_density(fs);
  CHECK(sup_diff(ric.samples, ma.samples) < 1e-8);

  Grid gd = build_grid(40.0, 4097);
  Density ricd = ricci_density(fubini_study_weight(gd));
  Density mad = ma_density(fubini_study_weight(gd));
  CHECK(sup_diff(ricd.samples, mad.samples) < 1e-6);
  CHECK(ricd.mass == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("ricci_density: football carries cone atoms") {
  Grid g = build_grid(40.0, 4097);
  Density ric = ricci_density(football_weight(0.5, g));
  Density ma = ma_density(football_weight(0.5, g));
  // smooth parts agree; degree-2 completion includes the two cone atoms
  CHECK(sup_diff(ric.samples, ma.samples) < 1e-6);
  CHECK(std::abs(ric.mass - 2.0) < 4.0 * (1.0 - 0.5) * 1e-3);
}

TEST_CASE("ricci_density: quadratic weight has zero Ricci") {
  Grid g = build_grid(40.0, 4097);
  // w = x^2/2 has constant second derivative, so -(log w'')'' = 0
  auto p = std::make_shared<AnalyticProfile>();
  p->value = [](double x) { return 0.5 * x * x; };
  p->d1 = [](double x) { return x; };
  p->d2 = [](double) { return 1.0; };
  RadialWeight w = weight_from_profile(p, -g.x_max, g.x_max, g);
  Density ric = ricci_density(w);
  for (int i = 2; i + 2 < g.n; ++i) CHECK(std::abs(ric.samples[i]) < 1e-7);
}

TEST_CASE("weight serialization round-trips bit-exactly") {
  Grid g = build_grid(12.5, 257);
  std::mt19937_64 rng(7);
  RadialWeight w = fubini_study_weight(g);
  for (auto& v : w.samples) {
    double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    v += 1e-3 * u;
  }
  std::ostringstream os;
  save_weight(w, os);
  std::istringstream is(os.str());
  RadialWeight r = load_weight(is);
  REQUIRE(r.grid.n == w.grid.n);
  CHECK(std::memcmp(r.samples.data(), w.samples.data(), sizeof(double) * w.samples.size()) == 0);
  CHECK(r.slope_minus == w.slope_minus);
  CHECK(r.slope_plus == w.slope_plus);
  CHECK(r.grid.h == w.grid.h);
}

TEST_CASE("edge slopes match declared asymptotics") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  CHECK(std::abs(fs.edge_slope_left() - fs.slope_minus) < 1e-3);
  CHECK(std::abs(fs.edge_slope_right() - fs.slope_plus) < 1e-3);
  RadialWeight fb = football_weight(0.25, g);
  CHECK(std::abs(fb.edge_slope_right() - fb.slope_plus) < 1e-3);
}

TEST_CASE("translate_weight: analytic shift is exact, interpolated shift is close") {
  Grid g = build_grid(40.0, 4097);
  RadialWeight fs = fubini_study_weight(g);
  RadialWeight tr = translate_weight(fs, 1.0);
  for (int i = 0; i < g.n; i += 512)
    CHECK(tr.samples[i] == doctest::Approx(fs.value(g.node(i) + 1.0)).epsilon(1e-14));
  RadialWeight sampled = fs;
  sampled.profile.reset();
  RadialWeight tr2 = translate_weight(sampled, 1.0);
  CHECK(sup_diff(tr.samples, tr2.samples) < 1e-8);
}
