#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "intertwine/cli/config.hpp"
#include "intertwine/cli/io.hpp"
#include "intertwine/cli/runners.hpp"
#include "intertwine/cli/verify.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/vectorize.hpp"

using namespace intertwine;
using namespace intertwine::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("intertwine_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::vector<std::string>& args) {
  try {
    parse_config(args);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

// Recursive numeric comparison of two JSON documents.
double json_distance(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>());
  if (a.type() != b.type() || a.size() != b.size()) return INFINITY;
  if (a.is_array()) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, json_distance(a[i], b[i]));
    return d;
  }
  if (a.is_object()) {
    double d = 0.0;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return INFINITY;
      d = std::max(d, json_distance(it.value(), b[it.key()]));
    }
    return d;
  }
  return a == b ? 0.0 : INFINITY;
}

}  // namespace

TEST_CASE("defaults follow the demo configuration") {
  const fs::path out = scratch("defaults");
  const RunConfig cfg = parse_config({"floquet", "--model", "quantum-dimer", "--out", out.string()});
  CHECK(cfg.mode == Mode::Floquet);
  CHECK(cfg.problem.params.J == 1.0);
  CHECK(cfg.problem.params.gamma == 0.5);
  CHECK(cfg.problem.params.T == 1.0);
  CHECK(cfg.problem.params.waveform == Waveform::SquareWave);
  CHECK(cfg.psi0.size() == 2);
  CHECK(cfg.steps_per_period == 200);
  CHECK(cfg.formats.csv);
  CHECK(cfg.formats.json);
  CHECK_FALSE(cfg.formats.gnuplot);
  const RunConfig c2 =
      parse_config({"floquet", "--model", "classical-dimer", "--J", "2", "--JT", "3", "--out", out.string()});
  CHECK(c2.problem.params.gamma == 1.0);
  CHECK(c2.problem.params.T == 1.5);
  CHECK(c2.problem.params.waveform == Waveform::DeltaKicks);
}

TEST_CASE("config errors are specific") {
  const fs::path dir = scratch("errors");
  CHECK(error_of({"static", "--model", "trimer", "--out", dir.string()}).find("unknown model") != std::string::npos);
  CHECK(error_of({"static", "--out", dir.string()}).find("no input") != std::string::npos);
  CHECK(error_of({"static", "--model", "quantum-dimer", "--input", "x.json"}).find("exactly one") != std::string::npos);
  CHECK(error_of({"floquet", "--model", "quantum-dimer", "--waveform", "kicks", "--out", dir.string()}) != "");
  CHECK(error_of({"scan", "--model", "quantum-dimer", "--grid", "0:2:1,0.2:4:5", "--out", dir.string()})
            .find("count >= 2") != std::string::npos);
  CHECK(error_of({"scan", "--model", "quantum-dimer", "--grid", "0:2:5,0:4:5", "--out", dir.string()})
            .find("positive") != std::string::npos);
  CHECK(error_of({"trace", "--model", "quantum-dimer", "--psi0", "1,0", "--out", dir.string()})
            .find("amplitudes") != std::string::npos);
  CHECK(error_of({"bogus"}) != "");
  CHECK(error_of({"static", "--model", "quantum-dimer", "--format", "xml", "--out", dir.string()}) != "");

  const fs::path f = dir / "sched.json";
  std::ofstream(f) << R"({"schedule": [{"segment": {"duration": 1.0, "h": [[0, 1], [1, 0]]}}]})";
  const std::string missing = error_of({"floquet", "--input", f.string(), "--out", dir.string()});
  CHECK(missing.find("'period'") != std::string::npos);

  const fs::path g = dir / "nonsquare.json";
  std::ofstream(g) << R"({"hamiltonian": [[0, 1, 2], [1, 0, 2]]})";
  CHECK(error_of({"static", "--input", g.string(), "--out", dir.string()}).find("hamiltonian[0]") != std::string::npos);

  const fs::path h = dir / "broken.json";
  std::ofstream(h) << "{\n  \"hamiltonian\": [[0, 1],\n  [1, @]]\n}\n";
  CHECK(error_of({"static", "--input", h.string(), "--out", dir.string()}).find(":3:") != std::string::npos);

  const fs::path k = dir / "field.json";
  std::ofstream(k) << R"({"period": 1, "schedule": [{"segment": {"duration": "x", "h": [[1]]}}]})";
  CHECK(error_of({"floquet", "--input", k.string(), "--out", dir.string()}).find("schedule[0].segment.duration") !=
        std::string::npos);
}

TEST_CASE("psi0, grid and format parsing") {
  const auto psi = parse_psi0("1,0;0.5,-0.25");
  REQUIRE(psi.size() == 2);
  CHECK(psi[1] == Complex{0.5, -0.25});
  CHECK_THROWS_AS(parse_psi0("1;2"), ConfigError);
  const auto g = parse_grid("0:2:21,0.2:4:20");
  CHECK(g.gamma.points == 21);
  CHECK(g.jt.max == 4.0);
  const auto f = parse_formats("json,gnuplot");
  CHECK_FALSE(f.csv);
  CHECK(f.gnuplot);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
}

TEST_CASE("raw matrix input reproduces the built-in model") {
  const fs::path a = scratch("raw_a"), b = scratch("raw_b");
  const fs::path f = b / "h1.json";
  std::ofstream(f) << R"({"hamiltonian": [[[0, 0.5], [1, 0]], [[1, 0], [0, -0.5]]]})";
  const auto builtin = run_static(parse_config({"static", "--model", "quantum-dimer", "--out", a.string()}));
  const auto raw = run_static(parse_config({"static", "--input", f.string(), "--out", b.string()}));
  Json x = builtin.report, y = raw.report;
  for (const char* key : {"source", "model", "J", "gamma", "JT", "waveform", "analytic_eta_pm", "analytic_conserved_basis"}) {
    x.erase(key);
    y.erase(key);
  }
  // The built-in run relabels its conserved block with the closed forms; compare spans instead.
  const auto span = [](const Json& r) {
    std::vector<ComplexMatrix> out;
    for (const auto& e : r["eigen_operators"]) {
      if (e["rate"][0].get<double>() != 0.0 || e["rate"][1].get<double>() != 0.0) continue;
      ComplexMatrix m(2, 2);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) m(i, j) = {e["operator"][i][j][0].get<double>(), e["operator"][i][j][1].get<double>()};
      }
      out.push_back(m);
    }
    return out;
  };
  CHECK(operator_subspace_distance(span(x), span(y)) < 1e-12);
  for (std::size_t i = 2; i < 4; ++i) CHECK(json_distance(x["eigen_operators"][i], y["eigen_operators"][i]) < 1e-12);
  x.erase("eigen_operators");
  y.erase("eigen_operators");
  CHECK(json_distance(x, y) < 1e-12);
}

TEST_CASE("static report contents") {
  const fs::path dir = scratch("static");
  const auto out = run_static(parse_config({"static", "--model", "quantum-dimer", "--out", dir.string()}));
  CHECK(out.report["conserved_count"] == 2);
  CHECK(out.report["pt_phase"] == "symmetric");
  CHECK(out.report["spectrum_pairing_max_distance"].get<double>() < 1e-9);
  const auto& ops = out.report["eigen_operators"];
  REQUIRE(ops.size() == 4);
  CHECK(std::abs(ops[3]["rate"][1].get<double>() - 2 * std::sqrt(0.75)) < 1e-9);
  CHECK(ops[2]["rank"] == 1);
  CHECK(fs::exists(dir / "static.json"));
  CHECK(fs::exists(dir / "static_spectrum.csv"));

  const fs::path id = scratch("identity");
  std::ofstream(id / "h.json") << R"({"hamiltonian": [[1, 0], [0, 1]]})";
  const auto idr = run_static(parse_config({"static", "--input", (id / "h.json").string(), "--out", id.string()}));
  CHECK(idr.report["conserved_count"] == 4);
}

TEST_CASE("floquet report") {
  const fs::path dir = scratch("floquet");
  const auto q = run_floquet(parse_config({"floquet", "--model", "quantum-dimer", "--out", dir.string()}));
  const auto& ops = q.report["eigen_operators"];
  CHECK(std::abs(ops[2]["lambda"][0].get<double>() + 0.44) < 0.01);
  CHECK(std::abs(ops[2]["lambda"][1].get<double>() - 0.9) < 0.01);
  CHECK(q.report["closed_form"]["propagator_difference"].get<double>() < 1e-12);
  CHECK(q.report["recursive"]["symmetrized"]["distance_from_conserved_span"].get<double>() < 1e-8);

  const auto c = run_floquet(parse_config({"floquet", "--model", "classical-dimer", "--out", dir.string()}));
  CHECK(c.report["closed_form"]["eta2_matching_form"] == "text");
  CHECK(std::abs(c.report["eigen_operators"][2]["lambda"][0].get<double>() + 0.65) < 0.005);

  const auto u = run_floquet(parse_config({"floquet", "--model", "quantum-dimer", "--gamma", "0", "--out", dir.string()}));
  CHECK(u.report["conserved_count"] == 2);
  for (const auto& e : u.report["eigen_operators"]) {
    CHECK(std::hypot(e["lambda"][0].get<double>(), e["lambda"][1].get<double>()) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("trace CSV layout and determinism") {
  const fs::path a = scratch("trace_a"), b = scratch("trace_b");
  const std::vector<std::string> args{"trace", "--model", "quantum-dimer", "--periods", "5", "--steps-per-period", "20",
                                      "--format", "csv,json,gnuplot"};
  auto with_out = [&](const fs::path& p) {
    auto v = args;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  const auto ra = run_trace(parse_config(with_out(a)));
  run_trace(parse_config(with_out(b)));
  const std::string csv = slurp(a / "trace.csv");
  CHECK(csv.rfind("t_over_T,operator_label,re_value,im_value,is_stroboscopic,re_lambda_pow_t,im_lambda_pow_t,normalized\n", 0) ==
        0);
  CHECK(csv == slurp(b / "trace.csv"));
  CHECK(slurp(a / "trace.json") == slurp(b / "trace.json"));
  CHECK(fs::exists(a / "trace.gp"));
  CHECK(ra.report["operators"][0]["label"] == "eta1");
  CHECK(ra.report["operators"][0]["max_stroboscopic_deviation"].get<double>() < 1e-8);
  CHECK(ra.report["operators"][2]["label"] == "eta_plus");
}

TEST_CASE("scan output") {
  const fs::path dir = scratch("scan");
  const auto s = run_scan(parse_config(
      {"scan", "--model", "classical-dimer", "--grid", "0:2:21,0.5:1.5:3", "--out", dir.string()}));
  bool found = false;
  for (const auto& pt : s.report["contour"]) {
    if (std::abs(pt["JT"].get<double>() - 1.0) < 1e-12) {
      found = true;
      CHECK(std::abs(pt["gamma_over_J"].get<double>() - 1.3651517644503206) < 1e-8);
      CHECK(pt["cross_validated"] == true);
    }
  }
  CHECK(found);
  CHECK(s.report["max_numerical_vs_analytic"].get<double>() < 1e-6);
  const std::string grid = slurp(dir / "scan.csv");
  std::istringstream lines(grid);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "gamma_over_J,JT,phase,kappa_ratio,ok,error");
  while (std::getline(lines, line)) {
    if (line.rfind("0,", 0) == 0) CHECK(line.find(",symmetric,") != std::string::npos);
  }

  const auto st = run_scan(parse_config(
      {"scan", "--model", "quantum-dimer", "--waveform", "static", "--grid", "0:2:9,0.5:2:4", "--out", dir.string()}));
  REQUIRE(st.report["contour"].size() == 4);
  for (const auto& pt : st.report["contour"]) CHECK(std::abs(pt["gamma_over_J"].get<double>() - 1.0) < 1e-12);
}

TEST_CASE("verify suite") {
  const VerifyReport ok = run_verify_suite();
  for (const auto& c : ok.checks) {
    INFO(c.name << " measured " << c.measured);
    CHECK(c.passed);
  }
  CHECK(ok.eta2_form == "text");

  VerifyOptions mutated;
  mutated.liouvillian_builder = [](const ComplexMatrix& h) {
    const auto id = ComplexMatrix::identity(h.rows());
    ComplexMatrix l = kron(transpose(h), id) + kron(id, adjoint(h));
    l *= Complex{0.0, -1.0};
    return l;
  };
  const VerifyReport bad = run_verify_suite(mutated);
  CHECK_FALSE(bad.all_passed());
  CHECK_FALSE(bad.checks[0].passed);
  CHECK(bad.checks[0].name.find("spectrum pairing") != std::string::npos);

  VerifyOptions strict;
  strict.tolerance_override = 1e-15;
  const VerifyReport tight = run_verify_suite(strict);
  CHECK_FALSE(tight.all_passed());
  std::ostringstream table;
  print_verify_table(tight, table);
  CHECK(table.str().find("FAIL") != std::string::npos);
}
