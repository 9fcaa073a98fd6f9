#pragma once

#include <string>
#include <vector>

#include "intertwine/models.hpp"
#include "intertwine/operators.hpp"

namespace intertwine {

struct ScanPoint {
  double gamma_over_J = 0.0;
  double JT = 0.0;
  PtPhase phase = PtPhase::Symmetric;
  double kappa_ratio = 1.0;  // |kappa_max| / |kappa_min|
  bool ok = true;
  std::string error;  // solver failure at this point; not fatal to the scan
};

// Row-major over the grid: JT outer, gamma/J inner.
struct ScanResult {
  ScanAxis gamma_axis;
  ScanAxis jt_axis;
  std::vector<ScanPoint> points;

  const ScanPoint& at(int jt_index, int gamma_index) const {
    return points[static_cast<std::size_t>(jt_index) * gamma_axis.points + gamma_index];
  }
};

ScanPoint evaluate_scan_point(DimerModel model, Waveform waveform, double J, double gamma_over_J, double JT,
                              double phase_tol = kDefaultPhaseTol);

// INTERTWINE_THREADS if set to a positive integer, else the OpenMP default.
int scan_thread_count();

/// Evaluates every grid point in parallel (up to `threads`, 0 = scan_thread_count()).
/// Each point is independent, so the result does not depend on scheduling.
ScanResult phase_scan(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis,
                      const ScanAxis& jt_axis, double J = 1.0, double phase_tol = kDefaultPhaseTol,
                      int threads = 0);

// Same grid, one thread, in order.
ScanResult phase_scan_serial(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis,
                             const ScanAxis& jt_axis, double J = 1.0, double phase_tol = kDefaultPhaseTol);

}  // namespace intertwine
