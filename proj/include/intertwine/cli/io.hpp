#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/floquet.hpp"

namespace intertwine::cli {

using Json = nlohmann::ordered_json;

// Contents of an --input file. Any subset may be present; the mode decides
// which parts are required.
struct InputDocument {
  std::optional<std::string> model;
  std::optional<double> J, gamma, JT;
  std::optional<std::string> waveform;
  std::optional<ComplexVector> psi0;
  std::optional<ComplexMatrix> hamiltonian;
  std::optional<double> period;
  std::optional<std::vector<ScheduleEvent>> events;
};

/// Parses the JSON input format: complex numbers as [re, im], matrices as
/// row-major arrays of rows. Errors name the file with line:column for syntax
/// problems and the JSON path (e.g. schedule[1].segment.h) for schema problems.
InputDocument parse_input(const std::string& text, const std::string& origin);
InputDocument load_input(const std::filesystem::path& path);

// %.17g
std::string format_double(double x);

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);
double finite_or_nan(double x);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvWriter& row();
  CsvWriter& cell(double x);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(bool b);
  CsvWriter& cell(int v);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes the whole file at once; throws ConfigError if it cannot be opened.
void write_text(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace intertwine::cli
