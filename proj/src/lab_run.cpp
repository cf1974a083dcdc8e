#include "radke/density.hpp"
#include "radke/einstein.hpp"
#include "radke/error.hpp"
#include "radke/functionals.hpp"
#include "radke/geodesics.hpp"
#include "radke/lab.hpp"
#include "radke/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

namespace radke {

namespace {

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// deterministic uniform in [0,1) regardless of the standard library
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

// convexity-preserving sech bump with rejection
RadialWeight seeded_bump(const RadialWeight& base, std::mt19937_64& rng, double c_lo = 0.05,
                         double c_hi = 0.25, double x_span = 3.0) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    double c = c_lo + (c_hi - c_lo) * uniform01(rng);
    double x0 = x_span * (2.0 * uniform01(rng) - 1.0);
    try {
      return add_sech_bump(base, c, x0);
    } catch (const Error&) {
      c_hi = std::max(c_lo, 0.7 * c_hi); // shrink and redraw
    }
  }
  throw Error("seeded_bump: no convex bump found");
}

struct Manifest {
  std::ostringstream body;
  std::vector<std::string> failures;

  void config_echo(const ExperimentConfig& c) {
    body << "# radke manifest\n";
    body << "version=0.1.0\n";
    body << "experiment=" << c.experiment << '\n';
    body << "x_max=" << fmtg(c.x_max) << '\n';
    body << "n=" << c.n << '\n';
    body << "beta=" << fmtg(c.beta) << '\n';
    body << "eps=" << fmtg(c.eps) << '\n';
    if (!c.eps_list.empty()) {
      body << "eps_list=";
      for (size_t i = 0; i < c.eps_list.size(); ++i)
        body << (i ? "," : "") << fmtg(c.eps_list[i]);
      body << '\n';
    }
    body << "m=" << c.m << '\n';
    body << "seed=" << c.seed << '\n';
    body << "tol=" << fmtg(c.tol) << '\n';
    body << "twister=" << c.twister << '\n';
  }
  void record(const std::string& key, double value) { body << key << '=' << fmtg(value) << '\n'; }
  void note(const std::string& line) { body << line << '\n'; }
  void invariant(const std::string& name, bool ok, const std::string& detail = "") {
    body << "invariant." << name << '=' << (ok ? "pass" : "fail");
    if (!detail.empty()) body << " (" << detail << ')';
    body << '\n';
    if (!ok) failures.push_back(name + (detail.empty() ? "" : ": " + detail));
  }
};

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  os << body;
}

TwisterSpec make_twister(const ExperimentConfig& c, const Grid& g) {
  if (c.twister == "none") return TwisterSpec::none(g);
  if (c.twister == "smooth_background") return TwisterSpec::smooth_background(1.0 - c.beta, g);
  if (c.twister == "smoothed_cone") return TwisterSpec::smoothed_cone(c.beta, c.eps, g);
  return TwisterSpec::conical(c.beta, g);
}

RadialWeight default_seed(const TwisterSpec& tw, const Grid& g) {
  switch (tw.kind) {
    case TwisterKind::None: return fubini_study_weight(g);
    case TwisterKind::SmoothBackground: return scale_weight(fubini_study_weight(g), tw.mass / 2);
    default: return football_weight(tw.mass / 2, g);
  }
}

RadialWeight make_endpoint(const std::string& kind, const ExperimentConfig& c, const Grid& g,
                           std::mt19937_64& rng) {
  if (kind == "fs") return fubini_study_weight(g);
  if (kind == "football") return football_weight(c.beta, g);
  return seeded_bump(fubini_study_weight(g), rng);
}

void run_ke_solve(const ExperimentConfig& c, const Grid& g, const SolverConfig& scfg,
                  Manifest& man, const std::filesystem::path& dir) {
  TwisterSpec tw = make_twister(c, g);
  SolveInfo info;
  RadialWeight sol = solve_twisted_ke(tw, default_seed(tw, g), scfg, &info);
  save_weight_file(sol, (dir / "ke_solution.txt").string());
  man.record("certificate.first_variation", info.certificate);
  man.record("newton.iterations", info.iterations);
  man.record("newton.residual", info.residual);
  man.invariant("residual_certificate", info.certificate <= 10.0 * scfg.tol,
                fmtg(info.certificate));
}

void run_geodesic_audit(const ExperimentConfig& c, const Grid& g, Manifest& man,
                        const std::filesystem::path& dir) {
  std::mt19937_64 rng(c.seed);
  RadialWeight e0 = make_endpoint(c.endpoint0, c, g, rng);
  RadialWeight e1 = make_endpoint(c.endpoint1, c, g, rng);
  GeodesicPath path = exact_geodesic(e0, e1, c.m); // throws on slope mismatch
  TwisterSpec tw = make_twister(c, g);
  auto rows = convexity_audit(path, tw);
  std::ostringstream csv;
  write_audit_csv(rows, csv);
  write_file(dir / "audit.csv", csv.str());

  DefectField def = geodesic_defect(path, 0.0);
  double d2_min = 1e300, decomp = 0;
  for (const auto& r : rows) {
    d2_min = std::min(d2_min, r.D_second);
    decomp = std::max(decomp, std::abs(r.D_second - r.assembled));
  }
  man.record("audit.min_D2", d2_min);
  man.record("audit.max_decomposition_gap", decomp);
  man.record("audit.defect_sup", def.f_sup);
  man.invariant("ding_convexity", d2_min >= -1e-6, fmtg(d2_min));
  man.invariant("decomposition", decomp <= 1e-4, fmtg(decomp));
  man.invariant("geodesic_defect", def.f_sup <= 5e-4, fmtg(def.f_sup));
}

void run_cone_limit(const ExperimentConfig& c, const Grid& g, const SolverConfig& scfg,
                    Manifest& man, const std::filesystem::path& dir) {
  std::vector<double> eps_list = c.eps_list;
  if (eps_list.empty()) eps_list = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  ConeLimitResult r = cone_limit_study(c.beta, eps_list, c.window, g, scfg);
  std::ostringstream csv;
  write_cone_limit_csv(r, csv);
  write_file(dir / "cone_limit.csv", csv.str());
  for (const auto& row : r.rows)
    man.record("cone_limit.dist[eps=" + fmtg(row.eps) + "]", row.dist);
  man.invariant("cone_limit_monotone", r.strictly_decreasing);
}

void run_uniqueness(const ExperimentConfig& c, const Grid& g, const SolverConfig& scfg,
                    Manifest& man, const std::filesystem::path& dir) {
  std::mt19937_64 rng(c.seed);
  TwisterSpec tw = make_twister(c, g);
  std::vector<RadialWeight> seeds;
  std::vector<std::string> names;
  if (tw.translation_symmetric()) {
    RadialWeight base = default_seed(tw, g);
    seeds = {translate_weight(base, 2.0), translate_weight(base, -2.0)};
    names = {"base translated +2", "base translated -2"};
  } else {
    seeds = {seeded_bump(default_seed(tw, g), rng),
             scale_weight(fubini_study_weight(g), tw.mass / 2)};
    names = {"base + seeded bump", "rescaled fubini-study"};
  }
  UniquenessReport rep;
  if (c.parallel) {
    // independent solves; output ordering fixed by input index
    std::vector<std::future<RadialWeight>> futs;
    for (const auto& s : seeds)
      futs.push_back(std::async(std::launch::async,
                                [&tw, s, &scfg] { return solve_twisted_ke(tw, s, scfg); }));
    for (auto& f : futs) f.get(); // warm the cache deterministically
    rep = uniqueness_experiment(tw, seeds, names, scfg);
  } else {
    rep = uniqueness_experiment(tw, seeds, names, scfg);
  }
  std::ostringstream js;
  write_uniqueness_json(rep, js);
  write_file(dir / "uniqueness.json", js.str());
  man.record("uniqueness.max_raw", rep.max_raw);
  man.record("uniqueness.max_normalized", rep.max_normalized);
  man.note("uniqueness.verdict=" + rep.verdict);
  man.invariant("uniqueness_verdict", rep.verdict == "unique", rep.verdict);
}

void run_properness(const ExperimentConfig& c, const Grid& g, Manifest& man,
                    const std::filesystem::path& dir) {
  std::mt19937_64 rng(c.seed);
  TwisterSpec tw = make_twister(c, g);
  std::vector<RadialWeight> family;
  RadialWeight base = default_seed(tw, g);
  if (tw.translation_symmetric()) {
    for (double a : {0.0, 2.0, 4.0, 8.0}) family.push_back(translate_weight(base, a));
  } else {
    family.push_back(base);
    family.push_back(seeded_bump(base, rng, 0.05, 0.2));
    family.push_back(seeded_bump(base, rng, 0.05, 0.2));
    for (double a : {0.5, 1.0, 2.0, 3.0}) family.push_back(translate_weight(base, a));
    family.push_back(translate_weight(seeded_bump(base, rng, 0.05, 0.2), 1.5));
  }
  PropernessTable t = properness_scan(family, base, tw);
  std::ostringstream csv;
  write_properness_csv(t, csv);
  write_file(dir / "properness.csv", csv.str());
  man.note("properness.verdict=" + t.verdict);
  man.record("properness.a", t.a);
  man.record("properness.b", t.b);
}

void run_spectrum(const ExperimentConfig& c, const Grid& g, Manifest& man,
                  const std::filesystem::path& dir) {
  RadialWeight tau =
      (c.tau == "football") ? football_weight(c.beta, g) : fubini_study_weight(g);
  auto spec = lowest_spectrum(tau, c.count);
  std::ostringstream csv;
  write_spectrum_csv(spec, csv);
  write_file(dir / "spectrum.csv", csv.str());
  double worst = 0;
  for (const auto& sp : spec) worst = std::max(worst, sp.rayleigh_residual);
  man.record("spectrum.lambda1", spec.front().lambda);
  man.record("spectrum.max_rayleigh_residual", worst);
  man.invariant("rayleigh_residual", worst <= 1e-8, fmtg(worst));
}

} // namespace

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  auto t0 = std::chrono::steady_clock::now();
  std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  Manifest man;
  man.config_echo(config);

  SolverConfig scfg;
  scfg.tol = config.tol;
  Grid g = build_grid(config.x_max, config.n);

  if (config.experiment == "ke-solve")
    run_ke_solve(config, g, scfg, man, dir);
  else if (config.experiment == "geodesic-audit")
    run_geodesic_audit(config, g, man, dir);
  else if (config.experiment == "cone-limit")
    run_cone_limit(config, g, scfg, man, dir);
  else if (config.experiment == "uniqueness")
    run_uniqueness(config, g, scfg, man, dir);
  else if (config.experiment == "properness-scan")
    run_properness(config, g, man, dir);
  else if (config.experiment == "spectrum")
    run_spectrum(config, g, man, dir);

  auto t1 = std::chrono::steady_clock::now();
  man.note("wall_time_ms=" +
           std::to_string(
               std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()));
  result.failures = man.failures;
  result.exit_code = man.failures.empty() ? 0 : 1;
  man.note("exit=" + std::to_string(result.exit_code));
  write_file(dir / "manifest.txt", man.body.str());
  return result;
}

} // namespace radke
