#include "radke/error.hpp"
#include "radke/lab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"radial Kahler-Einstein laboratory"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  std::string config_path;
  std::vector<std::string> overrides;
  run_cmd->add_option("config", config_path, "config file (key = value lines)")->required();
  run_cmd->add_option("--set", overrides, "override config entries, key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "error: cannot open " << config_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    radke::ExperimentConfig cfg = radke::parse_config(buf.str(), overrides);
    radke::RunResult res = radke::run(cfg);
    for (const auto& f : res.failures) std::cerr << "invariant failed: " << f << "\n";
    return res.exit_code;
  } catch (const radke::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
