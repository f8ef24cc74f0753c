#pragma once

#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cds::cli {

enum class Command { kSpectrum, kEvolve, kSweepTime, kSweepGrid, kFigures };

/// Everything one invocation needs, after flag/config-file resolution.
struct RunConfig {
  Command command = Command::kSpectrum;

  double omega = 1.0;
  double g = 5.0;
  double gamma = 0.5;
  int n0 = 0;

  double t_start = 0.0;
  double t_end = 20.0;
  int samples = 2001;

  double gamma_min = 0.0;
  double gamma_max = 1.0;
  int gamma_steps = 101;
  int n0_min = 0;
  int n0_max = 30;
  double t_fixed = 4.0;
  double fig5_g = 1.0;

  std::filesystem::path out = ".";
  bool emit_svg = false;
  int precision = 12;
  int threads = 0;  ///< 0 = default; from CDS_THREADS
};

/// Bad flags, bad numbers, missing required options.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

/// --help and friends: text for stdout, success exit.
struct HelpRequested {
  std::string text;
};

/// Map argv (without the program name) onto a validated RunConfig.
/// `--config <file>` reads flat key=value lines (# comments); explicit flags
/// override file values.
RunConfig parse_args(const std::vector<std::string>& args);

/// Execute one command. Writes result files under config.out, human output to
/// `out`, diagnostics to `err`. Returns 0 only if every output was written and
/// every internal cross-check passed.
int run(const RunConfig& config, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace cds::cli
