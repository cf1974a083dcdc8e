#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace radke {

/// Batch experiment configuration, parsed from "key = value" text with '#'
/// comments. Unknown keys are rejected; numeric fields are validated against
/// the preconditions of the operations they feed.
struct ExperimentConfig {
  std::string experiment; // ke-solve | geodesic-audit | cone-limit |
                          // uniqueness | properness-scan | spectrum
  double x_max = 40.0;
  int n = 4097;
  double beta = 0.5;
  double eps = 1e-2;
  std::vector<double> eps_list;
  int m = 65;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  double tol = 1e-10;
  std::string twister = "none"; // none | smooth_background | smoothed_cone | conical
  std::string endpoint0 = "fs";      // fs | football | fs_bump
  std::string endpoint1 = "fs_bump";
  std::string tau = "fs"; // spectrum weight: fs | football
  double window = 10.0;
  int count = 5;
  int paths = 1;
  bool parallel = false;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides);

struct RunResult {
  int exit_code = 0; // 0 ok, 1 invariant failed, 2 precondition/config error
  std::vector<std::string> failures;
};

/// Runs one experiment, writing its reports and manifest.txt under
/// config.output_dir. Exit code 0 iff every asserted invariant passed.
RunResult run(const ExperimentConfig& config);

} // namespace radke
