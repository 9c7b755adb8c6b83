#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "casimir/cli.hpp"

using namespace casimir::cli;

int main(int argc, char** argv) {
  CLI::App app{"Casimir forces between dielectric spheres"};
  app.require_subcommand(1);
  std::string config_path, out_path;
  Overrides overrides;
  int L_max = 0;
  double temperature = 0.0;

  struct Command {
    const char* name;
    const char* help;
    CommandOutput (*run)(const RunConfig&);
  };
  const Command commands[] = {{"force", "force on every sphere of the ensemble", cmd_force},
                              {"scan2", "two-sphere force versus x = r / R", cmd_scan_two},
                              {"scan3", "three-sphere potential over (x, theta)", cmd_scan_three},
                              {"largen", "large-N ring potential versus N", cmd_large_n}};
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--lmax", L_max, "multipole truncation L_max (overrides the file)");
    sub->add_option("--temp", temperature, "temperature in K (overrides the file)");
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
  }
  for (const auto* sub : subs) {
    if (sub->count("--lmax")) overrides.L_max = L_max;
    if (sub->count("--temp")) overrides.temperature = temperature;
  }

  CommandOutput output;
  try {
    RunConfig config = load_config(config_path);
    apply(config, overrides);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) output = commands[i].run(config);
    }
  } catch (const ConfigError& e) {
    std::cerr << "casimir: config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::ConfigError);
  } catch (const std::invalid_argument& e) {
    std::cerr << "casimir: invalid input: " << e.what() << "\n";
    return static_cast<int>(ExitCode::ConfigError);
  }

  for (const auto& d : output.diagnostics) std::cerr << "casimir: " << d << "\n";
  if (out_path.empty()) {
    std::fwrite(output.csv.data(), 1, output.csv.size(), stdout);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << output.csv;
    if (!f) {
      std::cerr << "casimir: cannot write " << out_path << "\n";
      return static_cast<int>(ExitCode::ConfigError);
    }
  }
  if (!output.converged) {
    std::cerr << "casimir: result not converged in L_max\n";
    return static_cast<int>(ExitCode::NonConvergence);
  }
  return 0;
}
