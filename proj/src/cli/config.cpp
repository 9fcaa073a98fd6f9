#include "intertwine/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "intertwine/cli/io.hpp"

namespace intertwine::cli {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Static: return "static";
    case Mode::Floquet: return "floquet";
    case Mode::Trace: return "trace";
    case Mode::Scan: return "scan";
    case Mode::Verify: return "verify";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::Static, Mode::Floquet, Mode::Trace, Mode::Scan, Mode::Verify}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::size_t Problem::dim() const {
  if (schedule) return schedule->dim();
  if (hamiltonian) return hamiltonian->rows();
  return 2;
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not a number");
  }
  if (used != s.size() || !std::isfinite(x)) throw ConfigError(what + ": '" + s + "' is not a finite number");
  return x;
}

ScanAxis parse_axis(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError("--grid: " + what + " axis must be min:max:n");
  ScanAxis axis;
  axis.min = to_number(parts[0], "--grid " + what + " min");
  axis.max = to_number(parts[1], "--grid " + what + " max");
  const double n = to_number(parts[2], "--grid " + what + " points");
  if (n != std::floor(n) || n < 2 || n > 1e6) throw ConfigError("--grid: " + what + " needs an integer count >= 2");
  axis.points = static_cast<int>(n);
  if (!(axis.max > axis.min)) throw ConfigError("--grid: " + what + " max must exceed min");
  return axis;
}

template <class T>
T pick(const std::optional<T>& flag, const std::optional<T>& file, T fallback) {
  if (flag) return *flag;
  if (file) return *file;
  return fallback;
}

void require_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("output directory " + dir.string() + " cannot be created");
  const auto probe = dir / ".write_probe";
  {
    std::ofstream os(probe);
    if (!os) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

Waveform resolve_waveform(Mode mode, DimerModel model, const std::optional<std::string>& name) {
  if (!name) return mode == Mode::Static ? Waveform::Static : default_floquet_waveform(model);
  const auto w = parse_waveform(*name);
  if (!w) throw ConfigError("--waveform: unknown waveform '" + *name + "' (static, square, kicks)");
  if (mode == Mode::Static && *w != Waveform::Static) {
    throw ConfigError("--waveform: static mode analyses the time-independent Hamiltonian; use floquet or trace for '" +
                      *name + "'");
  }
  return *w;
}

Problem builtin_problem(const RawOptions& raw, const InputDocument& doc, Mode mode, const std::string& model_name) {
  const auto model = parse_model(model_name);
  if (!model) throw ConfigError("unknown model '" + model_name + "' (quantum-dimer, classical-dimer)");
  Problem p;
  p.source = model_name;
  p.model = *model;
  const double J = pick(raw.J, doc.J, 1.0);
  p.params.J = J;
  p.params.gamma = pick(raw.gamma, doc.gamma, 0.5 * J);
  const double jt = pick(raw.JT, doc.JT, 1.0);
  p.params.T = jt / J;
  p.params.waveform = resolve_waveform(mode, *model, raw.waveform ? raw.waveform : doc.waveform);
  try {
    p.params.validate();
    if (!(jt > 0.0)) throw InvalidInput("dimer: JT must be positive");
    p.hamiltonian = dimer_hamiltonian(*model, p.params.J, p.params.gamma);
    if (mode != Mode::Static) p.schedule = dimer_schedule(*model, p.params);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

Problem raw_problem(const RawOptions& raw, const InputDocument& doc, Mode mode, const std::string& origin) {
  if (raw.gamma || raw.J || raw.JT || raw.waveform) {
    throw ConfigError("--gamma/--J/--JT/--waveform apply to built-in models only, not to " + origin);
  }
  Problem p;
  p.source = origin;
  p.hamiltonian = doc.hamiltonian;
  auto missing = [&](const std::string& field, const std::string& why) {
    return ConfigError(origin + ": missing field '" + field + "' (" + why + ")");
  };
  switch (mode) {
    case Mode::Static:
      if (!doc.hamiltonian) throw missing("hamiltonian", "static mode needs a Hamiltonian");
      break;
    case Mode::Floquet:
    case Mode::Trace:
      if (!doc.events && !doc.hamiltonian) throw missing("schedule", std::string(to_string(mode)) + " mode needs a schedule");
      if (!doc.period) throw missing("period", std::string(to_string(mode)) + " mode needs the period T");
      try {
        if (doc.events) {
          const std::size_t dim =
              std::visit([](const auto& e) { return e.generator.rows(); }, doc.events->front());
          p.schedule = Schedule(dim, *doc.period, *doc.events);
        } else {
          p.schedule = Schedule(doc.hamiltonian->rows(), *doc.period, {Segment{*doc.period, *doc.hamiltonian}});
        }
      } catch (const Error& e) {
        throw ConfigError(origin + ": schedule: " + e.what());
      }
      break;
    case Mode::Scan:
      throw ConfigError("scan mode needs a built-in model (--model), not raw matrices");
    case Mode::Verify:
      break;
  }
  return p;
}

}  // namespace

ComplexVector parse_psi0(std::string_view text) {
  ComplexVector v;
  for (const auto& entry : split(text, ';')) {
    const auto parts = split(entry, ',');
    if (parts.size() != 2) throw ConfigError("--psi0: each amplitude must be 're,im' (got '" + entry + "')");
    v.emplace_back(to_number(parts[0], "--psi0"), to_number(parts[1], "--psi0"));
  }
  return v;
}

GridSpec parse_grid(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("--grid: expected 'gmin:gmax:n,tmin:tmax:n'");
  GridSpec g{parse_axis(parts[0], "gamma/J"), parse_axis(parts[1], "JT")};
  if (g.gamma.min < 0.0) throw ConfigError("--grid: gamma/J must be non-negative");
  if (!(g.jt.min > 0.0)) throw ConfigError("--grid: JT bounds must be positive");
  return g;
}

Formats parse_formats(std::string_view text) {
  Formats f{false, false, false};
  for (const auto& name : split(text, ',')) {
    if (name == "csv") {
      f.csv = true;
    } else if (name == "json") {
      f.json = true;
    } else if (name == "gnuplot") {
      f.gnuplot = true;
    } else {
      throw ConfigError("--format: unknown format '" + name + "' (csv, json, gnuplot)");
    }
  }
  return f;
}

RunConfig parse_config(const RawOptions& raw) {
  RunConfig cfg;
  const auto mode = parse_mode(raw.command);
  if (!mode) throw ConfigError("unknown command '" + raw.command + "' (static, floquet, trace, scan, verify)");
  cfg.mode = *mode;

  if (cfg.mode != Mode::Verify) {
    if (raw.model && raw.input) throw ConfigError("exactly one input source: pass --model or --input, not both");
    if (!raw.model && !raw.input) throw ConfigError("no input: pass --model NAME or --input FILE");
    InputDocument doc;
    if (raw.input) doc = load_input(*raw.input);
    if (raw.model) {
      cfg.problem = builtin_problem(raw, doc, cfg.mode, *raw.model);
    } else if (doc.model) {
      if (doc.hamiltonian || doc.events || doc.period) {
        throw ConfigError(*raw.input + ": give either 'model' or raw matrices, not both");
      }
      cfg.problem = builtin_problem(raw, doc, cfg.mode, *doc.model);
    } else {
      cfg.problem = raw_problem(raw, doc, cfg.mode, *raw.input);
    }

    if (raw.psi0) {
      cfg.psi0 = parse_psi0(*raw.psi0);
    } else if (doc.psi0) {
      cfg.psi0 = *doc.psi0;
    } else if (cfg.problem.dim() == 2) {
      cfg.psi0 = plus_x_state();
    }
    if (cfg.mode == Mode::Trace) {
      if (cfg.psi0.empty()) throw ConfigError("trace mode needs --psi0 for dimension " + std::to_string(cfg.problem.dim()));
      if (cfg.psi0.size() != cfg.problem.dim()) {
        throw ConfigError("--psi0 has " + std::to_string(cfg.psi0.size()) + " amplitudes, system dimension is " +
                          std::to_string(cfg.problem.dim()));
      }
      double norm = 0.0;
      for (const auto& z : cfg.psi0) norm += std::norm(z);
      if (!(norm > 0.0)) throw ConfigError("--psi0 must be non-zero");
    }
  }

  cfg.steps_per_period = raw.steps_per_period.value_or(200);
  if (cfg.steps_per_period < 1) throw ConfigError("--steps-per-period must be at least 1");
  cfg.periods = raw.periods.value_or(50);
  if (cfg.periods < 1) throw ConfigError("--periods must be at least 1");
  if (raw.grid) cfg.grid = parse_grid(*raw.grid);
  if (raw.tol_eig) {
    if (!(*raw.tol_eig > 0.0)) throw ConfigError("--tol-eig must be positive");
    cfg.tol.eig = *raw.tol_eig;
  }
  if (raw.tol_rank) {
    if (!(*raw.tol_rank > 0.0)) throw ConfigError("--tol-rank must be positive");
    cfg.tol.rank = *raw.tol_rank;
  }
  if (raw.tol_override) {
    if (!(*raw.tol_override >= 0.0)) throw ConfigError("--tol-override must be non-negative");
    cfg.tol_override = *raw.tol_override;
  }
  if (raw.format) cfg.formats = parse_formats(*raw.format);
  if (raw.out) cfg.out = *raw.out;
  if (cfg.mode != Mode::Verify) require_writable(cfg.out);
  return cfg;
}

namespace {

std::unique_ptr<CLI::App> make_app(RawOptions& raw) {
  auto app = std::make_unique<CLI::App>("Conserved and intertwining operators of non-Hermitian Hamiltonians",
                                        "intertwine");
  app->add_option("command", raw.command, "static | floquet | trace | scan | verify")
      ->required()
      ->check(CLI::IsMember({"static", "floquet", "trace", "scan", "verify"}));
  app->add_option("--model", raw.model, "Built-in model: quantum-dimer | classical-dimer");
  app->add_option("--input", raw.input, "JSON input file (model parameters or raw matrices)");
  app->add_option("--gamma", raw.gamma, "Gain/loss strength (default 0.5 J)");
  app->add_option("--J", raw.J, "Coupling (default 1)");
  app->add_option("--JT", raw.JT, "Coupling times period (default 1)");
  app->add_option("--waveform", raw.waveform, "static | square | kicks");
  app->add_option("--psi0", raw.psi0, "Initial state 're,im;re,im;...' (default |+x>)");
  app->add_option("--steps-per-period", raw.steps_per_period, "Trace samples per period (default 200)");
  app->add_option("--periods", raw.periods, "Trace length in periods (default 50)");
  app->add_option("--grid", raw.grid, "Scan grid 'gmin:gmax:n,tmin:tmax:n' over (gamma/J, JT)");
  app->add_option("--tol-eig", raw.tol_eig, "Eigen-residual tolerance (default 1e-9)");
  app->add_option("--tol-rank", raw.tol_rank, "Relative singular-value cut-off (default 1e-9)");
  app->add_option("--tol-override", raw.tol_override, "verify: use this threshold for every check");
  app->add_option("--out", raw.out, "Output directory (default ./out)");
  app->add_option("--format", raw.format, "Comma list of csv,json,gnuplot (default csv,json)");
  return app;
}

}  // namespace

CommandLine read_command_line(int argc, const char* const* argv) {
  CommandLine cl;
  auto app = make_app(cl.raw);
  try {
    app->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app->exit(e);
    cl.exit_code = code == 0 ? 0 : 1;
  }
  return cl;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RawOptions raw;
  auto app = make_app(raw);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app->parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(raw);
}

}  // namespace intertwine::cli
