#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/models.hpp"

namespace intertwine::cli {

// Bad flags, bad input files, unwritable output: exit code 1.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

enum class Mode { Static, Floquet, Trace, Scan, Verify };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct Formats {
  bool csv = true;
  bool json = true;
  bool gnuplot = false;
};

// What is being analysed. Built-in models carry their parameters so that
// closed-form cross-checks can be attached to the report.
struct Problem {
  std::string source;  // model name or input path
  std::optional<DimerModel> model;
  DimerParams params;
  std::optional<ComplexMatrix> hamiltonian;
  std::optional<Schedule> schedule;

  std::size_t dim() const;
};

struct GridSpec {
  ScanAxis gamma{0.0, 2.0, 41};
  ScanAxis jt{0.2, 4.0, 20};
};

struct RunConfig {
  Mode mode = Mode::Verify;
  Problem problem;
  ComplexVector psi0;
  int steps_per_period = 200;
  int periods = 50;
  GridSpec grid;
  AnalysisTolerances tol;
  std::optional<double> tol_override;  // verify: replaces every threshold
  std::filesystem::path out = "out";
  Formats formats;
};

// Flag values as typed, before validation. Unset optionals take defaults.
struct RawOptions {
  std::string command;
  std::optional<std::string> model;
  std::optional<std::string> input;
  std::optional<double> gamma;
  std::optional<double> J;
  std::optional<double> JT;
  std::optional<std::string> waveform;
  std::optional<std::string> psi0;
  std::optional<int> steps_per_period;
  std::optional<int> periods;
  std::optional<std::string> grid;
  std::optional<double> tol_eig;
  std::optional<double> tol_rank;
  std::optional<double> tol_override;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

/// Validates flags, loads --input if present and fills defaults
/// (J = 1, gamma = 0.5 J, JT = 1, psi0 = |+x>). Throws ConfigError.
RunConfig parse_config(const RawOptions& raw);

// Same, from an argv-style list (without the program name).
RunConfig parse_config(const std::vector<std::string>& args);

ComplexVector parse_psi0(std::string_view text);
GridSpec parse_grid(std::string_view text);
Formats parse_formats(std::string_view text);

}  // namespace intertwine::cli

namespace intertwine::cli {

// argv parsing for the executable. Prints help or usage errors itself; when
// `exit_code` is set the caller should return it.
struct CommandLine {
  RawOptions raw;
  std::optional<int> exit_code;
};

CommandLine read_command_line(int argc, const char* const* argv);

}  // namespace intertwine::cli
