#include <exception>
#include <iostream>

#include "intertwine/cli/config.hpp"
#include "intertwine/cli/runners.hpp"
#include "intertwine/cli/verify.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;
constexpr int kVerifyFailed = 3;

int run(const intertwine::cli::RunConfig& cfg) {
  using namespace intertwine::cli;
  if (cfg.mode == Mode::Verify) {
    VerifyOptions opt;
    opt.tolerance_override = cfg.tol_override;
    const VerifyReport report = run_verify_suite(opt);
    print_verify_table(report, std::cout);
    if (report.all_passed()) return 0;
    for (const auto& c : report.checks) {
      if (!c.passed) std::cerr << "intertwine: verify: FAILED " << c.name << " (measured " << c.measured << ")\n";
    }
    return kVerifyFailed;
  }
  RunOutput out;
  switch (cfg.mode) {
    case Mode::Static: out = run_static(cfg); break;
    case Mode::Floquet: out = run_floquet(cfg); break;
    case Mode::Trace: out = run_trace(cfg); break;
    case Mode::Scan: out = run_scan(cfg); break;
    case Mode::Verify: break;
  }
  for (const auto& f : out.files) std::cout << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace intertwine;
  const auto cl = cli::read_command_line(argc, argv);
  if (cl.exit_code) return *cl.exit_code;

  cli::RunConfig cfg;
  try {
    cfg = cli::parse_config(cl.raw);
  } catch (const std::exception& e) {
    std::cerr << "intertwine: error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    return run(cfg);
  } catch (const cli::ConfigError& e) {
    std::cerr << "intertwine: error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "intertwine: numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}
