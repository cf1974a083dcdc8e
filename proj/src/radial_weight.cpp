#include "radke/radial_weight.hpp"
#include "radke/error.hpp"
#include "radke/fd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace radke {

namespace {

// 2 log(2 cosh(s x / 2)) and derivatives, written to stay exact in the tails
// (no 1 - 1 cancellation).
double log2cosh_value(double s, double x) {
  double y = std::abs(s * x);
  return y + 2.0 * std::log1p(std::exp(-y));
}
double log2cosh_d1(double s, double x) {
  double e = std::exp(-std::abs(s * x));
  double t = (1.0 - e) / (1.0 + e);
  return (x < 0 ? -s : s) * t;
}
double log2cosh_d2(double s, double x) {
  double e = std::exp(-std::abs(s * x));
  double q = 1.0 + e;
  return 2.0 * s * s * e / (q * q);
}

std::shared_ptr<const AnalyticProfile> log2cosh_profile(double s) {
  auto p = std::make_shared<AnalyticProfile>();
  p->value = [s](double x) { return log2cosh_value(s, x); };
  p->d1 = [s](double x) { return log2cosh_d1(s, x); };
  p->d2 = [s](double x) { return log2cosh_d2(s, x); };
  p->d1_inverse = [s](double p_) {
    double r = p_ / s;
    return (std::log1p(r) - std::log1p(-r)) / s;
  };
  return p;
}

RadialWeight sample_profile(std::shared_ptr<const AnalyticProfile> p, double am, double ap,
                            const Grid& g) {
  RadialWeight w;
  w.grid = g;
  w.samples.resize(g.n);
  for (int i = 0; i < g.n; ++i) w.samples[i] = p->value(g.node(i));
  w.slope_minus = am;
  w.slope_plus = ap;
  w.profile = std::move(p);
  return w;
}

double default_convexity_tol(const RadialWeight& w) {
  double m = 0.0;
  for (double v : w.samples) m = std::max(m, std::abs(v));
  double eps = std::numeric_limits<double>::epsilon();
  return std::max(1e-12, 8.0 * eps * m / (w.grid.h * w.grid.h));
}

} // namespace

double RadialWeight::value(double x) const {
  if (profile) return profile->value(x);
  const Grid& g = grid;
  if (x <= -g.x_max) return samples.front() + slope_minus * (x + g.x_max);
  if (x >= g.x_max) return samples.back() + slope_plus * (x - g.x_max);
  double u = (x + g.x_max) / g.h;
  int i = std::min(static_cast<int>(u), g.n - 2);
  // local 4th-order slope estimates at the cell endpoints
  auto slope_at = [&](int j) {
    if (j >= 2 && j <= g.n - 3)
      return (samples[j - 2] - 8.0 * samples[j - 1] + 8.0 * samples[j + 1] - samples[j + 2]) /
             (12.0 * g.h);
    if (j == 0) return (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * g.h);
    if (j == g.n - 1)
      return (3.0 * samples[j] - 4.0 * samples[j - 1] + samples[j - 2]) / (2.0 * g.h);
    return (samples[j + 1] - samples[j - 1]) / (2.0 * g.h);
  };
  double t = u - i;
  double s0 = slope_at(i), s1 = slope_at(i + 1);
  double w0 = samples[i], w1 = samples[i + 1];
  double t2 = t * t, t3 = t2 * t;
  return w0 * (2 * t3 - 3 * t2 + 1) + g.h * s0 * (t3 - 2 * t2 + t) + w1 * (-2 * t3 + 3 * t2) +
         g.h * s1 * (t3 - t2);
}

double RadialWeight::convexity_margin() const {
  double m = std::numeric_limits<double>::infinity();
  const double h2 = grid.h * grid.h;
  for (int i = 1; i + 1 < grid.n; ++i)
    m = std::min(m, (samples[i - 1] - 2.0 * samples[i] + samples[i + 1]) / h2);
  return m;
}

bool RadialWeight::is_convex(double tol) const {
  if (tol < 0) tol = default_convexity_tol(*this);
  return convexity_margin() >= -tol;
}

std::vector<int> RadialWeight::nonconvex_nodes(double tol) const {
  if (tol < 0) tol = default_convexity_tol(*this);
  std::vector<int> out;
  const double h2 = grid.h * grid.h;
  for (int i = 1; i + 1 < grid.n; ++i)
    if ((samples[i - 1] - 2.0 * samples[i] + samples[i + 1]) / h2 < -tol) out.push_back(i);
  return out;
}

double RadialWeight::edge_slope_left() const { return radke::edge_slope_left(samples, grid.h); }
double RadialWeight::edge_slope_right() const { return radke::edge_slope_right(samples, grid.h); }

RadialWeight fubini_study_weight(const Grid& grid) {
  return sample_profile(log2cosh_profile(1.0), -1.0, 1.0, grid);
}

RadialWeight football_weight(double beta, const Grid& grid) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("football_weight: beta must lie in (0,1)");
  return sample_profile(log2cosh_profile(beta), -beta, beta, grid);
}

RadialWeight divisor_background_weight(const Grid& grid) { return fubini_study_weight(grid); }

RadialWeight affine_weight(double a, double b, const Grid& grid) {
  auto p = std::make_shared<AnalyticProfile>();
  p->value = [a, b](double x) { return a * x + b; };
  p->d1 = [a](double) { return a; };
  p->d2 = [](double) { return 0.0; };
  return sample_profile(std::move(p), a, a, grid);
}

RadialWeight canonical_weight(WeightKind kind, const Grid& grid, double beta, double a, double b) {
  switch (kind) {
    case WeightKind::FubiniStudy: return fubini_study_weight(grid);
    case WeightKind::Football: return football_weight(beta, grid);
    case WeightKind::DivisorBackground: return divisor_background_weight(grid);
    case WeightKind::Affine: return affine_weight(a, b, grid);
  }
  throw Error("canonical_weight: unknown kind");
}

RadialWeight weight_from_profile(std::shared_ptr<const AnalyticProfile> p, double slope_minus,
                                 double slope_plus, const Grid& grid) {
  return sample_profile(std::move(p), slope_minus, slope_plus, grid);
}

RadialWeight add_sech_bump(const RadialWeight& w, double c, double x0) {
  RadialWeight out = w;
  auto sech = [](double u) { return 1.0 / std::cosh(u); };
  for (int i = 0; i < w.grid.n; ++i) out.samples[i] += c * sech(w.grid.node(i) - x0);
  if (w.profile) {
    auto base = w.profile;
    auto p = std::make_shared<AnalyticProfile>();
    p->value = [base, c, x0, sech](double x) { return base->value(x) + c * sech(x - x0); };
    p->d1 = [base, c, x0, sech](double x) {
      double s = sech(x - x0);
      return base->d1(x) - c * s * std::tanh(x - x0);
    };
    p->d2 = [base, c, x0, sech](double x) {
      double s = sech(x - x0);
      return base->d2(x) + c * (s - 2.0 * s * s * s);
    };
    out.profile = std::move(p);
  } else {
    out.profile.reset();
  }
  if (!out.is_convex())
    throw Error("add_sech_bump: bump c=" + std::to_string(c) + " at x0=" + std::to_string(x0) +
                " breaks convexity");
  return out;
}

RadialWeight translate_weight(const RadialWeight& w, double a) {
  RadialWeight out = w;
  for (int i = 0; i < w.grid.n; ++i) out.samples[i] = w.value(w.grid.node(i) + a);
  if (w.profile) {
    auto base = w.profile;
    auto p = std::make_shared<AnalyticProfile>();
    p->value = [base, a](double x) { return base->value(x + a); };
    p->d1 = [base, a](double x) { return base->d1(x + a); };
    p->d2 = [base, a](double x) { return base->d2(x + a); };
    if (base->d1_inverse)
      p->d1_inverse = [base, a](double q) { return base->d1_inverse(q) - a; };
    out.profile = std::move(p);
  }
  return out;
}

RadialWeight scale_weight(const RadialWeight& w, double s) {
  RadialWeight out = w;
  for (double& v : out.samples) v *= s;
  out.slope_minus *= s;
  out.slope_plus *= s;
  if (w.profile) {
    auto base = w.profile;
    auto p = std::make_shared<AnalyticProfile>();
    p->value = [base, s](double x) { return s * base->value(x); };
    p->d1 = [base, s](double x) { return s * base->d1(x); };
    p->d2 = [base, s](double x) { return s * base->d2(x); };
    out.profile = std::move(p);
  }
  return out;
}

RadialWeight add_weights(const RadialWeight& a, const RadialWeight& b) {
  if (!(a.grid == b.grid)) throw Error("add_weights: grid mismatch");
  RadialWeight out = a;
  for (int i = 0; i < a.grid.n; ++i) out.samples[i] += b.samples[i];
  out.slope_minus += b.slope_minus;
  out.slope_plus += b.slope_plus;
  if (a.profile && b.profile) {
    auto pa = a.profile, pb = b.profile;
    auto p = std::make_shared<AnalyticProfile>();
    p->value = [pa, pb](double x) { return pa->value(x) + pb->value(x); };
    p->d1 = [pa, pb](double x) { return pa->d1(x) + pb->d1(x); };
    p->d2 = [pa, pb](double x) { return pa->d2(x) + pb->d2(x); };
    out.profile = std::move(p);
  } else {
    out.profile.reset();
  }
  return out;
}

RadialWeight shift_weight(const RadialWeight& w, double c) {
  RadialWeight out = w;
  for (double& v : out.samples) v += c;
  if (w.profile) {
    auto base = w.profile;
    auto p = std::make_shared<AnalyticProfile>();
    p->value = [base, c](double x) { return base->value(x) + c; };
    p->d1 = base->d1;
    p->d2 = base->d2;
    p->d1_inverse = base->d1_inverse;
    out.profile = std::move(p);
  }
  return out;
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
} // namespace

void save_weight(const RadialWeight& w, std::ostream& os) {
  os << "# x w\n";
  for (int i = 0; i < w.grid.n; ++i)
    os << fmt17(w.grid.node(i)) << '\t' << fmt17(w.samples[i]) << '\n';
  os << "# slope_minus=" << fmt17(w.slope_minus) << '\n';
  os << "# slope_plus=" << fmt17(w.slope_plus) << '\n';
}

void save_weight_file(const RadialWeight& w, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("save_weight_file: cannot open " + path);
  save_weight(w, os);
}

RadialWeight load_weight(std::istream& is) {
  std::vector<double> xs, ws;
  double am = 0, ap = 0;
  bool have_am = false, have_ap = false;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (line.find("slope_minus") != std::string::npos && eq != std::string::npos) {
        am = std::strtod(line.c_str() + eq + 1, nullptr);
        have_am = true;
      } else if (line.find("slope_plus") != std::string::npos && eq != std::string::npos) {
        ap = std::strtod(line.c_str() + eq + 1, nullptr);
        have_ap = true;
      }
      continue;
    }
    std::istringstream ls(line);
    double x, v;
    if (!(ls >> x >> v)) throw Error("load_weight: malformed row: " + line);
    xs.push_back(x);
    ws.push_back(v);
  }
  if (xs.size() < 9) throw Error("load_weight: too few rows");
  if (!have_am || !have_ap) throw Error("load_weight: missing slope trailer lines");
  int n = static_cast<int>(xs.size());
  if (n % 2 == 0) throw Error("load_weight: even node count");
  RadialWeight w;
  w.grid.n = n;
  w.grid.h = xs[(n - 1) / 2 + 1]; // node(mid) == 0, node(mid+1) == h
  w.grid.x_max = w.grid.mid() * w.grid.h;
  w.samples = std::move(ws);
  w.slope_minus = am;
  w.slope_plus = ap;
  return w;
}

RadialWeight load_weight_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("load_weight_file: cannot open " + path);
  return load_weight(is);
}

} // namespace radke
