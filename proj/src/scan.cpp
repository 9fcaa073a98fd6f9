#include "intertwine/scan.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/liouvillian.hpp"

namespace intertwine {

ScanPoint evaluate_scan_point(DimerModel model, Waveform waveform, double J, double gamma_over_J, double JT,
                              double phase_tol) {
  ScanPoint point;
  point.gamma_over_J = gamma_over_J;
  point.JT = JT;
  try {
    const DimerParams p{J, gamma_over_J * J, JT / J, waveform};
    const auto fp = propagator(dimer_schedule(model, p), phase_tol);
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const Complex& k : fp.kappa.eigenvalues) {
      hi = std::max(hi, std::abs(k));
      lo = std::min(lo, std::abs(k));
    }
    point.kappa_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    // The static phase is a property of H itself, not of exp(-iHT).
    point.phase = waveform == Waveform::Static
                      ? classify_pt_phase(dimer_hamiltonian(model, p.J, p.gamma), phase_tol)
                      : fp.phase;
  } catch (const Error& e) {
    point.ok = false;
    point.error = e.what();
  }
  return point;
}

int scan_thread_count() {
  if (const char* env = std::getenv("INTERTWINE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min<long>(n, 1024));
  }
  return omp_get_max_threads();
}

namespace {

ScanResult empty_result(const ScanAxis& gamma_axis, const ScanAxis& jt_axis) {
  if (gamma_axis.points < 2 || jt_axis.points < 2) {
    throw InvalidInput("scan: grid needs at least 2 points per axis");
  }
  ScanResult result{gamma_axis, jt_axis, {}};
  result.points.resize(static_cast<std::size_t>(gamma_axis.points) * jt_axis.points);
  return result;
}

}  // namespace

ScanResult phase_scan(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis, const ScanAxis& jt_axis,
                      double J, double phase_tol, int threads) {
  ScanResult result = empty_result(gamma_axis, jt_axis);
  const int n = static_cast<int>(result.points.size());
  const int nthreads = threads > 0 ? threads : scan_thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (int idx = 0; idx < n; ++idx) {
    const int r = idx / gamma_axis.points, c = idx % gamma_axis.points;
    result.points[idx] = evaluate_scan_point(model, waveform, J, gamma_axis.at(c), jt_axis.at(r), phase_tol);
  }
  return result;
}

ScanResult phase_scan_serial(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis,
                             const ScanAxis& jt_axis, double J, double phase_tol) {
  ScanResult result = empty_result(gamma_axis, jt_axis);
  std::size_t idx = 0;
  for (int r = 0; r < jt_axis.points; ++r) {
    for (int c = 0; c < gamma_axis.points; ++c) {
      result.points[idx++] = evaluate_scan_point(model, waveform, J, gamma_axis.at(c), jt_axis.at(r), phase_tol);
    }
  }
  return result;
}

}  // namespace intertwine
