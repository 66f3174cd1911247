#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace lambscat;
using namespace lambscat::cli;

int main(int argc, char** argv) {
  CLI::App app{"lambscat: spectral, dynamical and scattering analysis of generalized Lamb models"};
  std::string command, config_path, out_dir, sweep;
  bool dump = false;
  app.add_option("command", command, "analyze | simulate | scatter | lp")
      ->required()
      ->check(CLI::IsMember({"analyze", "simulate", "scatter", "lp"}));
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--sweep", sweep, "vary one numeric config value: key=a:b:steps");
  app.add_flag("--dump-config", dump, "print the canonical configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[ConfigError]: " << e.what() << '\n';
    return 2;
  }

  RunConfig config;
  SweepSpec spec;
  try {
    config = load_config(config_path);
    if (!sweep.empty()) spec = parse_sweep(sweep);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.detail() << '\n';
    return exit_code_for(e.code());
  }
  if (dump) {
    std::cout << to_json(config).dump(2) << '\n';
    return 0;
  }

  const std::filesystem::path out = out_dir.empty() ? config.output.directory : out_dir;
  const Command cmd = *parse_command(command);
  if (sweep.empty()) return run_command(cmd, config, out, std::cout, std::cerr);
  try {
    return run_sweep(cmd, config, spec, out, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.detail() << '\n';
    return exit_code_for(e.code());
  }
}
