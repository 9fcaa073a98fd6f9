#include "intertwine/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "intertwine/cli/config.hpp"

namespace intertwine::cli {

namespace {

using RawJson = nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ConfigError(origin_ + ": " + path + ": " + what);
  }

  double number(const RawJson& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  std::string string(const RawJson& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  Complex complex(const RawJson& j, const std::string& path) const {
    if (j.is_number()) return {number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  }

  ComplexVector vector(const RawJson& j, const std::string& path) const {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of complex numbers");
    ComplexVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(complex(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
  }

  ComplexMatrix square_matrix(const RawJson& j, const std::string& path) const {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    std::vector<Complex> data;
    data.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::string row_path = path + "[" + std::to_string(r) + "]";
      const RawJson& row = j[r];
      if (!row.is_array()) fail(row_path, "expected an array (one matrix row)");
      if (row.size() != n) {
        fail(row_path, "matrix must be square: row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(n));
      }
      for (std::size_t c = 0; c < n; ++c) data.push_back(complex(row[c], row_path + "[" + std::to_string(c) + "]"));
    }
    return ComplexMatrix(n, n, std::move(data));
  }

  std::vector<ScheduleEvent> events(const RawJson& j, const std::string& path) const {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of events");
    std::vector<ScheduleEvent> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string ep = path + "[" + std::to_string(i) + "]";
      const RawJson& e = j[i];
      if (!e.is_object() || e.size() != 1) fail(ep, "expected {\"segment\": {...}} or {\"kick\": {...}}");
      if (e.contains("segment")) {
        const RawJson& s = e["segment"];
        const std::string sp = ep + ".segment";
        if (!s.is_object()) fail(sp, "expected an object");
        check_keys(s, sp, {"duration", "h"});
        if (!s.contains("duration")) fail(sp + ".duration", "missing field");
        if (!s.contains("h")) fail(sp + ".h", "missing field");
        const double d = number(s["duration"], sp + ".duration");
        if (d < 0.0) fail(sp + ".duration", "must be non-negative");
        out.emplace_back(Segment{d, square_matrix(s["h"], sp + ".h")});
      } else if (e.contains("kick")) {
        const RawJson& k = e["kick"];
        const std::string kp = ep + ".kick";
        if (!k.is_object()) fail(kp, "expected an object");
        check_keys(k, kp, {"k"});
        if (!k.contains("k")) fail(kp + ".k", "missing field");
        out.emplace_back(Kick{square_matrix(k["k"], kp + ".k")});
      } else {
        fail(ep, "unknown event type '" + e.begin().key() + "'");
      }
    }
    return out;
  }

  void check_keys(const RawJson& obj, const std::string& path, const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
  }

 private:
  std::string origin_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

InputDocument parse_input(const std::string& text, const std::string& origin) {
  RawJson doc;
  try {
    doc = RawJson::parse(text);
  } catch (const RawJson::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  const Reader rd(origin);
  if (!doc.is_object()) rd.fail("<root>", "expected a JSON object");
  rd.check_keys(doc, "", {"model", "J", "gamma", "JT", "waveform", "psi0", "hamiltonian", "period", "schedule"});

  InputDocument out;
  if (doc.contains("model")) out.model = rd.string(doc["model"], "model");
  if (doc.contains("J")) out.J = rd.number(doc["J"], "J");
  if (doc.contains("gamma")) out.gamma = rd.number(doc["gamma"], "gamma");
  if (doc.contains("JT")) out.JT = rd.number(doc["JT"], "JT");
  if (doc.contains("waveform")) out.waveform = rd.string(doc["waveform"], "waveform");
  if (doc.contains("psi0")) out.psi0 = rd.vector(doc["psi0"], "psi0");
  if (doc.contains("hamiltonian")) out.hamiltonian = rd.square_matrix(doc["hamiltonian"], "hamiltonian");
  if (doc.contains("period")) {
    out.period = rd.number(doc["period"], "period");
    if (!(*out.period > 0.0)) rd.fail("period", "must be positive");
  }
  if (doc.contains("schedule")) out.events = rd.events(doc["schedule"], "schedule");
  return out;
}

InputDocument load_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_input(ss.str(), path.string());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double finite_or_nan(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

Json to_json(Complex z) { return Json::array({z.real() == 0.0 ? 0.0 : z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

CsvWriter& CsvWriter::row() {
  rows_.emplace_back();
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (rows_.empty()) rows_.emplace_back();
  rows_.back().push_back(s);
  return *this;
}

CsvWriter& CsvWriter::cell(bool b) { return cell(std::string(b ? "1" : "0")); }

CsvWriter& CsvWriter::cell(int v) { return cell(std::to_string(v)); }

std::string CsvWriter::str() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << contents;
  if (!os) throw ConfigError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace intertwine::cli
