#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radke/einstein.hpp"
#include "radke/error.hpp"
#include "radke/functionals.hpp"

#include <cmath>
#include <sstream>

using namespace radke;

namespace {
Grid g() { return build_grid(40.0, 4097); }
const double kLog2 = std::log(2.0);

double sup_diff(const RadialWeight& a, const RadialWeight& b) {
  double m = 0;
  for (int i = 0; i < a.grid.n; ++i)
    m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
  return m;
}

double fv_sup(const RadialWeight& phi, const TwisterSpec& tw) {
  Density d = ding_first_variation(phi, tw);
  double m = 0;
  for (double v : d.samples) m = std::max(m, std::abs(v));
  return m;
}
} // namespace

TEST_CASE("solve: zero twister recovers fubini-study") {
  Grid gr = g();
  TwisterSpec tw = TwisterSpec::none(gr);
  RadialWeight seed = add_sech_bump(fubini_study_weight(gr), 0.15, 0.6);
  SolverConfig cfg;
  SolveInfo info;
  RadialWeight sol = solve_twisted_ke(tw, seed, cfg, &info);
  RadialWeight fs = fubini_study_weight(gr);
  CHECK(sup_diff(sol, fs) < 1e-7);
  CHECK(std::abs(sol.samples[gr.mid()] - 2 * kLog2) < 1e-7);
  CHECK(info.certificate <= 10 * cfg.tol);
}

TEST_CASE("solve: smooth background twister, no gauge") {
  Grid gr = g();
  double beta = 0.5;
  TwisterSpec tw = TwisterSpec::smooth_background(1.0 - beta, gr);
  RadialWeight target = scale_weight(fubini_study_weight(gr), beta);
  RadialWeight seed = add_sech_bump(target, 0.05, -0.4);
  SolverConfig cfg;
  cfg.gauge = Gauge::Free; // smooth twister: no gauge needed
  RadialWeight sol = solve_twisted_ke(tw, seed, cfg);
  CHECK(sup_diff(sol, target) < 1e-7);
  CHECK(std::abs(sol.samples[gr.mid()] - kLog2) < 1e-7);
}

TEST_CASE("solve: conical twister recovers the football") {
  Grid gr = g();
  TwisterSpec tw = TwisterSpec::conical(0.5, gr);
  RadialWeight fb = football_weight(0.5, gr);
  RadialWeight seed = add_sech_bump(fb, 0.03, 0.9);
  SolverConfig cfg;
  RadialWeight sol = solve_twisted_ke(tw, seed, cfg);
  CHECK(sup_diff(sol, fb) < 1e-7);
}

TEST_CASE("solve: gauge-degenerate case is flagged") {
  Grid gr = g();
  TwisterSpec tw = TwisterSpec::conical(0.5, gr);
  SolverConfig cfg;
  cfg.gauge = Gauge::Free;
  CHECK_THROWS_WITH_AS(solve_twisted_ke(tw, football_weight(0.5, gr), cfg),
                       "singular Jacobian, supply gauge", Error);
}

TEST_CASE("solve: closed-form anchors at tight residuals") {
  Grid gr = g();
  SolverConfig cfg;
  for (double beta : {0.25, 0.5, 0.75}) {
    CHECK(fv_sup(fubini_study_weight(gr), TwisterSpec::none(gr)) * 2.0 < 1e-9);
    CHECK(fv_sup(scale_weight(fubini_study_weight(gr), beta),
                 TwisterSpec::smooth_background(1.0 - beta, gr)) *
              2.0 * beta <
          1e-9);
    CHECK(fv_sup(football_weight(beta, gr), TwisterSpec::conical(beta, gr)) * 2.0 * beta < 1e-9);
  }
}

TEST_CASE("normalize_automorphism recenters translated footballs") {
  Grid gr = g();
  RadialWeight fb = football_weight(0.5, gr);
  RadialWeight tr = translate_weight(fb, 1.0);
  RadialWeight re = normalize_automorphism(tr);
  CHECK(sup_diff(re, fb) < 1e-6);
  // even input is unchanged
  RadialWeight same = normalize_automorphism(fb);
  CHECK(sup_diff(same, fb) < 1e-9);
  // constants are ignored by the barycenter
  RadialWeight sh = normalize_automorphism(shift_weight(fubini_study_weight(gr), 5.0));
  CHECK(sup_diff(sh, shift_weight(fubini_study_weight(gr), 5.0)) < 1e-9);
}

TEST_CASE("continuity path reaches the direct solve") {
  Grid gr = g();
  TwisterSpec tw = TwisterSpec::smoothed_cone(0.5, 1e-2, gr);
  RadialWeight phi0 = football_weight(0.5, gr);
  SolverConfig cfg;
  std::vector<double> schedule{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<SolveInfo> infos;
  auto path = continuity_path(tw, phi0, schedule, cfg, &infos);
  REQUIRE(path.size() == schedule.size());
  RadialWeight direct = solve_twisted_ke(tw, phi0, cfg);
  CHECK(sup_diff(path.back(), direct) < 1e-8);

  // t = 0 member solves the frozen equation at Newton tolerance
  CHECK(infos.front().residual <= cfg.tol * 10);

  CHECK_THROWS_AS(continuity_path(tw, phi0, {}, cfg), Error);
  CHECK_THROWS_AS(continuity_path(tw, phi0, {0.0, 0.5}, cfg), Error);
}

TEST_CASE("cds path stays fixed at the football") {
  Grid gr = g();
  SolverConfig cfg;
  std::vector<double> schedule;
  for (int k = 0; k <= 10; ++k) schedule.push_back(0.1 * k);
  for (double beta : {0.5}) {
    CdsPathResult r = cds_path(football_weight(beta, gr), schedule, cfg);
    CHECK(r.max_deviation <= 1e-7);
  }
  // beta -> 1 limit: the smooth anticanonical case
  CdsPathResult r = cds_path(fubini_study_weight(gr), schedule, cfg);
  CHECK(r.max_deviation <= 1e-7);
}

TEST_CASE("cone limit: distances decrease, masses stay in class") {
  Grid gr = g();
  SolverConfig cfg;
  ConeLimitResult r =
      cone_limit_study(0.5, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, 10.0, gr, cfg);
  CHECK(r.strictly_decreasing);
  for (const auto& row : r.rows) CHECK(std::abs(row.mass - 1.0) < 1e-8);
  CHECK_THROWS_AS(cone_limit_study(0.5, {1e-1, 1e-2}, 100.0, gr, cfg), Error);
  CHECK_THROWS_AS(cone_limit_study(0.5, {1e-2, 1e-1}, 10.0, gr, cfg), Error);

  std::ostringstream os;
  write_cone_limit_csv(r, os);
  CHECK(os.str().rfind("eps,dist,mass,F,D", 0) == 0);
}

TEST_CASE("smoothed-cone solutions are even in x") {
  Grid gr = g();
  SolverConfig cfg;
  TwisterSpec tw = TwisterSpec::smoothed_cone(0.5, 1e-2, gr);
  RadialWeight sol = solve_twisted_ke(tw, football_weight(0.5, gr), cfg);
  double asym = 0;
  for (int i = 0; i < gr.n; ++i)
    asym = std::max(asym, std::abs(sol.samples[i] - sol.samples[gr.n - 1 - i]));
  CHECK(asym < 1e-9);
}

TEST_CASE("uniqueness dichotomy") {
  Grid gr = g();
  SolverConfig cfg;
  double beta = 0.5;

  // strictly positive twister: raw agreement
  TwisterSpec smooth = TwisterSpec::smooth_background(1 - beta, gr);
  RadialWeight base = scale_weight(fubini_study_weight(gr), beta);
  std::vector<RadialWeight> seeds{add_sech_bump(base, 0.08, 0.5), base};
  UniquenessReport rep = uniqueness_experiment(smooth, seeds, {"bumped", "base"}, cfg);
  CHECK(rep.max_raw <= 1e-8);
  CHECK(rep.verdict == "unique");

  // conical twister: agreement only after normalization
  TwisterSpec con = TwisterSpec::conical(beta, gr);
  RadialWeight fb = football_weight(beta, gr);
  std::vector<RadialWeight> tseeds{translate_weight(fb, 2.0), translate_weight(fb, -2.0)};
  UniquenessReport rep2 = uniqueness_experiment(con, tseeds, {"+2", "-2"}, cfg);
  CHECK(rep2.max_raw > 0.5);
  CHECK(rep2.max_normalized <= 1e-6);
  CHECK(rep2.verdict == "unique");

  std::vector<RadialWeight> one{fb};
  CHECK_THROWS_AS(uniqueness_experiment(con, one, {}, cfg), Error);

  std::ostringstream os;
  write_uniqueness_json(rep2, os);
  CHECK(os.str().find("\"verdict\": \"unique\"") != std::string::npos);
}
