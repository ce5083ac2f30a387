#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpnormal/mpnormal.hpp"

namespace mpnormal::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitOracle = 2,
  kExitUsage = 3,
};

/// Flag defaults live here and nowhere else.
struct Options {
  std::string command;  // validate | spectrum | schatten | verify | report
  std::filesystem::path instance;
  long k_max = 16;
  double p = 2.0;
  std::size_t grid = 2000;
  std::string oracle = "char";  // char | fd | both
  std::string format = "json";  // json | csv
  std::vector<std::string> tol_overrides;  // name=value
  std::optional<std::filesystem::path> out;
  double probe_re = 0.0;
  double probe_im = 0.0;
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;  // envelope + results (json format)
  std::string csv;                // payload when format == csv
};

/// Runs one command against a parsed instance; never throws for mathematical
/// outcomes. Tool-level failures surface as exceptions.
CommandResult run_command(const Options& options);

/// Full driver: parse argv with CLI11, run, write to `out` (or --out), map
/// errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::ordered_json spectrum_to_json(const SpectrumSlice& slice);
std::string spectrum_to_csv(const SpectrumSlice& slice);

/// Report text with the wall-time field removed, for determinism checks.
std::string strip_wall_time(const std::string& report_json);

}  // namespace mpnormal::cli
