#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chaomarket::cli {

enum class Command { simulate, sweep, attractor, spectrum, analyze };

enum class Verbosity { quiet, normal, verbose };

struct CliInvocation {
  Command command = Command::simulate;
  std::optional<std::filesystem::path> config_path;
  std::vector<std::string> overrides;  // key=value, applied after the config file
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::filesystem::path> input_dir;  // analyze only
  Verbosity verbosity = Verbosity::normal;
  std::optional<double> constant_series;  // spectrum: replace x_t by a constant
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Only this variable is read from the environment.
inline constexpr const char* kOutputDirEnv = "CHAOMARKET_OUTPUT_DIR";

// Each command reports progress on `out` and diagnostics (resolved settings,
// machine-readable error records) on `err`, and returns an exit status.
int cmd_simulate(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_sweep(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_attractor(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_spectrum(const CliInvocation& inv, std::ostream& out, std::ostream& err);
int cmd_analyze(const CliInvocation& inv, std::ostream& out, std::ostream& err);

int dispatch(const CliInvocation& inv, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chaomarket::cli
