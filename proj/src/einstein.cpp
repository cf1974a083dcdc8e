#include "radke/einstein.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"
#include "radke/functionals.hpp"
#include "radke/ma_newton.hpp"

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

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void check_seed(const TwisterSpec& tw, const RadialWeight& phi_init) {
  if (!(phi_init.grid == tw.weight.grid)) throw Error("solve_twisted_ke: grid mismatch");
  double half = tw.mass / 2.0;
  if (std::abs(phi_init.slope_plus - half) > 1e-9 || std::abs(phi_init.slope_minus + half) > 1e-9)
    throw Error("solve_twisted_ke: seed slopes must be -+mass/2");
  if (!phi_init.is_convex()) throw Error("solve_twisted_ke: seed not convex");
}

// Constant normalization: int e^{-tau} = 2 / (sigma+ - sigma-).
double volume_normalization_shift(const std::vector<double>& phi, const TwisterSpec& tw,
                                  double sm, double sp) {
  const Grid& g = tw.weight.grid;
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = std::exp(-(phi[i] + tw.weight.samples[i]));
  double Q = exp_quadrature(v, g, sm, sp);
  return std::log(Q * (sp - sm) / 2.0);
}

} // namespace

double ma_barycenter(const RadialWeight& w) {
  Density d = ma_density(w);
  const Grid& g = w.grid;
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = g.node(i) * d.samples[i];
  double gap_plus = w.slope_plus - w.edge_slope_right();
  double gap_minus = w.edge_slope_left() - w.slope_minus;
  double num = trapezoid(f, g.h) + g.x_max * gap_plus - g.x_max * gap_minus;
  if (!(d.mass > 0)) throw Error("ma_barycenter: nonpositive mass");
  return num / d.mass;
}

RadialWeight normalize_automorphism(const RadialWeight& phi) {
  double a = ma_barycenter(phi);
  return translate_weight(phi, a);
}

RadialWeight solve_twisted_ke(const TwisterSpec& tw, const RadialWeight& phi_init,
                              const SolverConfig& cfg, SolveInfo* info) {
  check_seed(tw, phi_init);
  const Grid& g = phi_init.grid;
  const double M = tw.mass;
  const double sm = phi_init.slope_minus + tw.weight.slope_minus;
  const double sp = phi_init.slope_plus + tw.weight.slope_plus;
  if (!(sm < 0 && sp > 0)) throw Error("solve_twisted_ke: e^{-tau} not integrable");

  const bool translational = tw.translation_symmetric();
  if (translational && cfg.gauge == Gauge::Free)
    throw Error("singular Jacobian, supply gauge");

  RadialWeight seed = phi_init;
  if (translational) {
    // quotient the z -> lambda z orbit: center the seed, solve in the even
    // subspace; the barycenter gauge returns the centered representative
    double bary0 = ma_barycenter(phi_init);
    seed = translate_weight(phi_init, bary0);
  }

  MAProblem prob;
  prob.grid = g;
  prob.a_minus = phi_init.slope_minus;
  prob.a_plus = phi_init.slope_plus;
  prob.M = M;
  const std::vector<double>& psi = tw.weight.samples;
  prob.eval = [&g, &psi, M, sm, sp](const std::vector<double>& phi) {
    MAEvaluation ev;
    ev.v.resize(g.n);
    for (int i = 0; i < g.n; ++i) ev.v[i] = std::exp(-(phi[i] + psi[i]));
    ev.dscale.assign(g.n, 1.0);
    ev.Q = exp_quadrature(ev.v, g, sm, sp);
    ev.Tl = (M / ev.Q) * ev.v.front() / (-sm);
    ev.Tr = (M / ev.Q) * ev.v.back() / sp;
    return ev;
  };

  MAOptions opt;
  opt.tol = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.max_halvings = cfg.max_halvings;
  opt.order = cfg.order;
  opt.even_reduction = translational;
  opt.shift = MAOptions::Shift::Mean;

  MAResult res = ma_newton(prob, seed.samples, opt);

  RadialWeight out;
  out.grid = g;
  out.samples = std::move(res.phi);
  out.slope_minus = phi_init.slope_minus;
  out.slope_plus = phi_init.slope_plus;

  if (cfg.gauge == Gauge::PinValue) {
    double cur = out.value(cfg.pin_x);
    for (double& v : out.samples) v += cfg.pin_value - cur;
  } else {
    double c = volume_normalization_shift(out.samples, tw, sm, sp);
    for (double& v : out.samples) v += c;
  }

  if (info) {
    info->iterations = res.iterations;
    info->residual = res.residual;
    info->trace = res.trace;
    Density fv = ding_first_variation(out, tw);
    double cert = 0;
    for (double v : fv.samples) cert = std::max(cert, std::abs(v));
    info->certificate = cert * M; // back to the phi'' = M e^{-tau}/Q scale
  }
  return out;
}

std::vector<RadialWeight> continuity_path(const TwisterSpec& tw, const RadialWeight& phi0,
                                          const std::vector<double>& schedule,
                                          const SolverConfig& cfg,
                                          std::vector<SolveInfo>* infos) {
  if (schedule.empty()) throw Error("continuity_path: empty schedule");
  if (schedule.front() != 0.0 || schedule.back() != 1.0)
    throw Error("continuity_path: schedule must start at 0 and end at 1");
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw Error("continuity_path: schedule not increasing");
  const Grid& g = phi0.grid;
  const double M = tw.mass;
  double half = M / 2.0;
  if (std::abs(phi0.slope_plus - half) > 1e-9 || std::abs(phi0.slope_minus + half) > 1e-9)
    throw Error("continuity_path: phi0 slopes must be -+mass/2");
  const double sm = phi0.slope_minus + tw.weight.slope_minus;
  const double sp = phi0.slope_plus + tw.weight.slope_plus;

  bool translational = tw.translation_symmetric();
  if (translational) {
    // the reference weight must be even for the symmetric reduction
    for (int i = 0; i < g.n; ++i)
      if (std::abs(phi0.samples[i] - phi0.samples[g.n - 1 - i]) > 1e-9)
        throw Error("continuity_path: translation-symmetric twister needs an even phi0");
  }

  auto solve_at = [&](double t, const std::vector<double>& seed, SolveInfo* si) {
    MAProblem prob;
    prob.grid = g;
    prob.a_minus = phi0.slope_minus;
    prob.a_plus = phi0.slope_plus;
    prob.M = M;
    const std::vector<double>& psi = tw.weight.samples;
    const std::vector<double>& p0 = phi0.samples;
    prob.eval = [&g, &psi, &p0, t, M, sm, sp](const std::vector<double>& phi) {
      MAEvaluation ev;
      ev.v.resize(g.n);
      for (int i = 0; i < g.n; ++i)
        ev.v[i] = std::exp(-(t * phi[i] + (1.0 - t) * p0[i] + psi[i]));
      ev.dscale.assign(g.n, t);
      ev.Q = exp_quadrature(ev.v, g, sm, sp);
      ev.Tl = (M / ev.Q) * ev.v.front() / (-sm);
      ev.Tr = (M / ev.Q) * ev.v.back() / sp;
      return ev;
    };
    MAOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    opt.max_halvings = cfg.max_halvings;
    opt.order = cfg.order;
    opt.even_reduction = translational;
    opt.pin_row = (t == 0.0);
    opt.shift = MAOptions::Shift::Mean;
    MAResult r = ma_newton(prob, seed, opt);
    if (si) {
      si->iterations = r.iterations;
      si->residual = r.residual;
      si->trace = r.trace;
    }
    std::vector<double> phi = std::move(r.phi);
    // same constant convention as the direct solve
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::exp(-(phi[i] + tw.weight.samples[i]));
    double c = std::log(exp_quadrature(v, g, sm, sp) * (sp - sm) / 2.0);
    for (double& x : phi) x += c;
    return phi;
  };

  std::vector<RadialWeight> out;
  std::vector<double> warm = phi0.samples;
  double t_prev = 0.0;
  for (double t : schedule) {
    SolveInfo si;
    std::vector<double> sol;
    double lo = t_prev, target = t;
    int bisects = 0;
    std::vector<double> seed = warm;
    for (;;) {
      double attempt = target;
      try {
        sol = solve_at(attempt, seed, &si);
        if (attempt == t) break;
        seed = sol;
        lo = attempt;
        target = t;
      } catch (const SolveFailure& f) {
        if (++bisects > cfg.max_bisect)
          throw SolveFailure("continuity_path: step to t=" + std::to_string(t) +
                                 " failed after " + std::to_string(bisects) + " bisections",
                             f.residual_trace);
        target = 0.5 * (lo + target);
      }
    }
    warm = sol;
    t_prev = t;
    RadialWeight w;
    w.grid = g;
    w.samples = std::move(sol);
    w.slope_minus = phi0.slope_minus;
    w.slope_plus = phi0.slope_plus;
    out.push_back(std::move(w));
    if (infos) infos->push_back(si);
  }
  return out;
}

CdsPathResult cds_path(const RadialWeight& phi_base, const std::vector<double>& schedule,
                       const SolverConfig& cfg) {
  if (schedule.empty()) throw Error("cds_path: empty schedule");
  if (!phi_base.is_convex()) throw Error("cds_path: phi_base not convex");
  const Grid& g = phi_base.grid;
  const double M = phi_base.degree();
  std::vector<double> db = deriv2(phi_base.samples, g.h, cfg.order);
  const double gap_minus = phi_base.edge_slope_left() - phi_base.slope_minus;
  const double gap_plus = phi_base.slope_plus - phi_base.edge_slope_right();
  const std::vector<double>& pb = phi_base.samples;

  CdsPathResult out;
  std::vector<double> warm = pb;
  for (double s : schedule) {
    MAProblem prob;
    prob.grid = g;
    prob.a_minus = phi_base.slope_minus;
    prob.a_plus = phi_base.slope_plus;
    prob.M = M;
    prob.eval = [&g, &db, &pb, s, M, gap_minus, gap_plus](const std::vector<double>& phi) {
      MAEvaluation ev;
      ev.v.resize(g.n);
      for (int i = 0; i < g.n; ++i) ev.v[i] = std::exp(-s * (phi[i] - pb[i])) * db[i];
      ev.dscale.assign(g.n, s);
      double tl = std::exp(-s * (phi.front() - pb.front())) * gap_minus;
      double tr = std::exp(-s * (phi.back() - pb.back())) * gap_plus;
      ev.Q = trapezoid(ev.v, g.h) + tl + tr;
      ev.Tl = (M / ev.Q) * tl;
      ev.Tr = (M / ev.Q) * tr;
      return ev;
    };
    MAOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    opt.max_halvings = cfg.max_halvings;
    opt.order = cfg.order;
    opt.pin_row = (s == 0.0);
    opt.shift = MAOptions::Shift::Mean;
    MAResult r = ma_newton(prob, warm, opt);
    std::vector<double> phi = std::move(r.phi);
    // gauge: align the free constant to the base
    double mean = 0;
    for (int i = 0; i < g.n; ++i) mean += phi[i] - pb[i];
    mean /= g.n;
    for (double& x : phi) x -= mean;
    warm = phi;
    double dev = sup_diff(phi, pb);
    out.deviations.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
    RadialWeight w = phi_base;
    w.samples = std::move(phi);
    w.profile.reset();
    out.members.push_back(std::move(w));
  }
  return out;
}

ConeLimitResult cone_limit_study(double beta, const std::vector<double>& eps_list, double window,
                                 const Grid& grid, const SolverConfig& cfg) {
  if (eps_list.empty()) throw Error("cone_limit_study: empty eps list");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0)) throw Error("cone_limit_study: eps must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error("cone_limit_study: eps list must be strictly decreasing");
  }
  if (window > grid.x_max) throw Error("cone_limit_study: window exceeds x_max");
  RadialWeight base = football_weight(beta, grid);
  ConeLimitResult out;
  RadialWeight warm = base;
  for (double eps : eps_list) {
    TwisterSpec tw = TwisterSpec::smoothed_cone(beta, eps, grid);
    SolveInfo si;
    RadialWeight sol = solve_twisted_ke(tw, warm, cfg, &si);
    warm = sol;
    RadialWeight centered = normalize_automorphism(sol);
    // gauge alignment: translation above, then the best constant; the
    // midrange minimizes the sup over the window
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < grid.n; ++i) {
      if (std::abs(grid.node(i)) > window) continue;
      double d = centered.samples[i] - base.samples[i];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    ConeLimitRow row;
    row.eps = eps;
    row.dist = 0.5 * (hi - lo);
    row.mass = ma_density(sol).mass;
    row.F = functional_F(sol, tw);
    row.D = ding_value(sol, base, tw).D;
    out.rows.push_back(row);
  }
  out.strictly_decreasing = true;
  for (size_t i = 1; i < out.rows.size(); ++i)
    if (!(out.rows[i].dist < out.rows[i - 1].dist)) out.strictly_decreasing = false;
  return out;
}

void write_cone_limit_csv(const ConeLimitResult& r, std::ostream& os) {
  os << "eps,dist,mass,F,D\n";
  for (auto& row : r.rows)
    os << fmtg(row.eps) << ',' << fmtg(row.dist) << ',' << fmtg(row.mass) << ',' << fmtg(row.F)
       << ',' << fmtg(row.D) << '\n';
}

UniquenessReport uniqueness_experiment(const TwisterSpec& tw,
                                       const std::vector<RadialWeight>& seeds,
                                       const std::vector<std::string>& seed_names,
                                       const SolverConfig& cfg) {
  if (seeds.size() < 2) throw Error("uniqueness_experiment: need at least 2 seeds");
  UniquenessReport rep;
  rep.seeds = seed_names;
  while (rep.seeds.size() < seeds.size())
    rep.seeds.push_back("seed" + std::to_string(rep.seeds.size()));
  for (const auto& s : seeds) {
    RadialWeight sol = solve_twisted_ke(tw, s, cfg);
    if (tw.translation_symmetric()) {
      // the solver centers the orbit; report the member nearest the seed
      double b = ma_barycenter(s);
      if (std::abs(b) > 1e-12) sol = translate_weight(sol, -b);
    }
    rep.solutions.push_back(std::move(sol));
  }
  size_t k = seeds.size();
  rep.raw_distances.assign(k, std::vector<double>(k, 0.0));
  rep.normalized_distances.assign(k, std::vector<double>(k, 0.0));
  std::vector<RadialWeight> centered;
  for (const auto& s : rep.solutions) centered.push_back(normalize_automorphism(s));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      rep.raw_distances[i][j] = sup_diff(rep.solutions[i].samples, rep.solutions[j].samples);
      rep.normalized_distances[i][j] = sup_diff(centered[i].samples, centered[j].samples);
      rep.max_raw = std::max(rep.max_raw, rep.raw_distances[i][j]);
      rep.max_normalized = std::max(rep.max_normalized, rep.normalized_distances[i][j]);
    }
  double judged = tw.strictly_positive() ? rep.max_raw : rep.max_normalized;
  rep.verdict = judged <= 1e-6 ? "unique" : "non-unique";
  return rep;
}

void write_uniqueness_json(const UniquenessReport& r, std::ostream& os) {
  auto matrix = [&](const std::vector<std::vector<double>>& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
      s += i ? ",[" : "[";
      for (size_t j = 0; j < m[i].size(); ++j) s += (j ? "," : "") + fmtg(m[i][j]);
      s += "]";
    }
    return s + "]";
  };
  os << "{\n  \"seeds\": [";
  for (size_t i = 0; i < r.seeds.size(); ++i)
    os << (i ? ", " : "") << '"' << r.seeds[i] << '"';
  os << "],\n  \"raw_distances\": " << matrix(r.raw_distances)
     << ",\n  \"normalized_distances\": " << matrix(r.normalized_distances)
     << ",\n  \"max_raw\": " << fmtg(r.max_raw)
     << ",\n  \"max_normalized\": " << fmtg(r.max_normalized) << ",\n  \"verdict\": \""
     << r.verdict << "\"\n}\n";
}

} // namespace radke
