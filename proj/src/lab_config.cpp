#include "radke/error.hpp"
#include "radke/lab.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace radke {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') throw Error("config: bad number for " + key + ": " + v);
  return x;
}

long to_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  long x = std::strtol(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') throw Error("config: bad integer for " + key + ": " + v);
  return x;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment")
    c.experiment = value;
  else if (key == "x_max")
    c.x_max = to_double(key, value);
  else if (key == "n")
    c.n = static_cast<int>(to_int(key, value));
  else if (key == "beta")
    c.beta = to_double(key, value);
  else if (key == "eps")
    c.eps = to_double(key, value);
  else if (key == "eps_list") {
    c.eps_list.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) c.eps_list.push_back(to_double(key, trim(item)));
  } else if (key == "m")
    c.m = static_cast<int>(to_int(key, value));
  else if (key == "seed")
    c.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (key == "output_dir")
    c.output_dir = value;
  else if (key == "tol")
    c.tol = to_double(key, value);
  else if (key == "twister")
    c.twister = value;
  else if (key == "endpoint0")
    c.endpoint0 = value;
  else if (key == "endpoint1")
    c.endpoint1 = value;
  else if (key == "tau")
    c.tau = value;
  else if (key == "window")
    c.window = to_double(key, value);
  else if (key == "count")
    c.count = static_cast<int>(to_int(key, value));
  else if (key == "paths")
    c.paths = static_cast<int>(to_int(key, value));
  else if (key == "parallel")
    c.parallel = (value == "true" || value == "1");
  else
    throw Error("config: unknown key: " + key);
}

void validate(const ExperimentConfig& c) {
  static const std::set<std::string> experiments = {"ke-solve",   "geodesic-audit",
                                                    "cone-limit", "uniqueness",
                                                    "properness-scan", "spectrum"};
  if (c.experiment.empty()) throw Error("config: missing experiment");
  if (!experiments.count(c.experiment))
    throw Error("config: unknown experiment: " + c.experiment);
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw Error("config: beta outside (0,1)");
  if (c.n % 2 == 0 || c.n < 129) throw Error("config: n must be odd and >= 129");
  if (c.x_max < 10.0) throw Error("config: x_max must be >= 10");
  if (c.eps < 0.0) throw Error("config: eps must be >= 0");
  for (double e : c.eps_list)
    if (!(e > 0.0)) throw Error("config: eps_list entries must be positive");
  if (c.m < 3) throw Error("config: m must be >= 3");
  if (!(c.tol > 0.0)) throw Error("config: tol must be positive");
  if (c.count < 1) throw Error("config: count must be >= 1");
  if (c.paths < 1) throw Error("config: paths must be >= 1");
  static const std::set<std::string> twisters = {"none", "smooth_background", "smoothed_cone",
                                                 "conical"};
  if (!twisters.count(c.twister)) throw Error("config: unknown twister: " + c.twister);
  static const std::set<std::string> endpoints = {"fs", "football", "fs_bump"};
  if (!endpoints.count(c.endpoint0) || !endpoints.count(c.endpoint1))
    throw Error("config: unknown endpoint kind");
  if (c.tau != "fs" && c.tau != "football") throw Error("config: unknown tau: " + c.tau);
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
  return parse_config(text, {});
}

ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config: expected key = value, got: " + line);
    apply(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw Error("config: bad override: " + ov);
    apply(c, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  validate(c);
  return c;
}

} // namespace radke
