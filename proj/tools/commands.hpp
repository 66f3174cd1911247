#ifndef LAMBSCAT_TOOLS_COMMANDS_HPP
#define LAMBSCAT_TOOLS_COMMANDS_HPP

#include "config.hpp"

#include "lambscat/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace lambscat::cli {

enum class Command { Analyze, Simulate, Scatter, LP };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);

/// 2 for invalid input, 4 for PointSpectrumPresent, 3 for numerical failures.
int exit_code_for(ErrorCode code);

/// Runs one command, writing its files under `out`. Errors are reported on
/// `err` as "error[<Code>]: <detail>" and mapped to an exit code.
int run_command(Command command, const RunConfig& config, const std::filesystem::path& out, std::ostream& log,
                std::ostream& err);

struct SweepSpec {
  std::string key;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;

  double value(int i) const { return steps == 1 ? from : from + (to - from) * i / (steps - 1); }
};

/// "key=a:b:steps"; ConfigError when malformed.
SweepSpec parse_sweep(const std::string& text);

/// Runs the command once per sweep value, concurrently (LAMBSCAT_THREADS caps
/// the worker count), each in out/sweep_NNN. Writes out/sweep.json; returns 0
/// when every run succeeded, else the first failing run's exit code.
int run_sweep(Command command, const RunConfig& config, const SweepSpec& sweep, const std::filesystem::path& out,
              std::ostream& log, std::ostream& err);

/// %.17g
std::string format_double(double x);

}  // namespace lambscat::cli

#endif  // LAMBSCAT_TOOLS_COMMANDS_HPP
