#pragma once

// Command-line front end: problem-file parsing, task dispatch and report assembly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "mttokit/io.hpp"

namespace mttokit::cli {

using json = io::json;

inline constexpr const char* kToolName = "mttokit";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Flag values; unset flags fall back to the problem file, then to defaults.
struct Flags {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> grid;
  int json_indent = 2;
  std::optional<std::string> convention;
  std::optional<std::string> csv;
  bool timings = false;
};

struct ProblemFile {
  std::string schema_version = kSchemaVersion;
  std::string task;
  std::uint64_t seed = 0;
  json payload;
  std::optional<double> pass_tolerance;

  static ProblemFile parse(const json& j);
};

/// Tasks accepted in problem files and as subcommands.
bool is_task(const std::string& name);

/// Runs one task and returns the report.  Throws InputError / NumericalError.
json run(const ProblemFile& problem, const Flags& flags);

/// Built-in problem for the paper-examples task.
ProblemFile default_paper_examples();

/// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mttokit::cli
