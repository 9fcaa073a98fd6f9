#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/numlin.hpp"
#include "intertwine/operators.hpp"

namespace intertwine {

// Constant generator H for `duration`; propagates as exp(-i H duration).
struct Segment {
  double duration = 0.0;
  ComplexMatrix generator;
};

// Instantaneous non-unitary factor exp(K). Any delta-function weight is already
// folded into K.
struct Kick {
  ComplexMatrix generator;
};

using ScheduleEvent = std::variant<Segment, Kick>;

/// One period of a piecewise-constant Hamiltonian, events in time order. The
/// segment durations must add up to the period (1e-12 relative).
class Schedule {
 public:
  Schedule(std::size_t dim, double period, std::vector<ScheduleEvent> events);

  std::size_t dim() const { return dim_; }
  double period() const { return period_; }
  const std::vector<ScheduleEvent>& events() const { return events_; }

  // Start time of every event (a kick's time is the time it fires).
  std::vector<double> event_times() const;

 private:
  std::size_t dim_;
  double period_;
  std::vector<ScheduleEvent> events_;
};

ComplexMatrix event_factor(const ScheduleEvent& event);

struct FloquetPropagator {
  ComplexMatrix gf;
  Spectrum kappa;
  PtPhase phase = PtPhase::Symmetric;
};

/// G_F(T) as the time-ordered product, earliest event rightmost. The phase
/// compares the moduli of the kappa (equal: symmetric).
FloquetPropagator propagator(const Schedule& schedule, double phase_tol = kDefaultPhaseTol);

// G_F^T (x) G_F^dag: acts as eta -> G_F^dag eta G_F on vec(eta).
ComplexMatrix build_floquet_superoperator(const ComplexMatrix& gf);

// ||G^dag op G - lambda op||_F
double floquet_residual(const ComplexMatrix& op, const ComplexMatrix& gf, Complex multiplier);

/// Hermitian basis of the unit-multiplier eigenspace, taken as the SVD null
/// space of (G - 1) so that defective neighbourhoods of EP contours are handled.
std::vector<EigenOperator> stroboscopic_conserved(const ComplexMatrix& gf,
                                                  double tol_rank = kDefaultTolRank);

/// All N^2 (eta, lambda) pairs; `rate` carries lambda. Conserved operators come
/// first (Hermitian basis), then the rest ordered by |lambda - 1| with
/// near-equal distances grouped and sorted by decreasing arg(lambda).
std::vector<EigenOperator> floquet_eigen_operators(const ComplexMatrix& gf,
                                                   const AnalysisTolerances& tol = {});

struct RecursiveCandidates {
  ComplexMatrix symmetrized;      // (eta1 G + G^dag eta1) / 2
  ComplexMatrix antisymmetrized;  // -i (eta1 G - G^dag eta1) / 2
  bool symmetrized_independent = false;
  bool antisymmetrized_independent = false;
};

// Throws InvalidInput when eta1 is not stroboscopically conserved.
RecursiveCandidates recursive_floquet(const ComplexMatrix& eta1, const ComplexMatrix& gf);

struct TimeShift {
  ComplexMatrix s;  // time-ordered propagator over [0, t0]
  Schedule shifted;
};

/// Moves the time origin to t0 in [0, T): the shifted schedule is the cyclic
/// rotation of events (splitting a segment if needed) and its propagator is
/// S G_F S^-1. Rejects t0 that coincides with a kick.
TimeShift time_shift(const Schedule& schedule, double t0);

// S^-1^dag eta S^-1: where a conserved operator goes under the shift.
ComplexMatrix transform_invariant(const ComplexMatrix& eta, const ComplexMatrix& s);

// --- dense-time traces -------------------------------------------------------

struct TraceLabel {
  std::string name;
  Complex eigenvalue{1.0, 0.0};
  bool is_rate = false;  // static rate E (reference e^{E t}) vs Floquet multiplier
};

// Reference curve for a label at time t (units of the period): lambda^t by the
// principal logarithm, or e^{E t T} for a rate.
Complex reference_value(const TraceLabel& label, double t_over_period, double period);

struct TraceSeries {
  std::vector<double> times;                 // units of the period
  std::vector<std::vector<Complex>> values;  // values[op][time]
  std::vector<std::size_t> stroboscopic_indices;
  std::vector<TraceLabel> labels;
  std::vector<bool> normalized;  // false: <psi0|eta|psi0> ~ 0, values left raw
  double max_stroboscopic_drift = 0.0;  // dense grid vs repeated G_F, relative
};

/// <psi(t)|eta|psi(t)> / <psi(0)|eta|psi(0)> on a uniform grid. Segments are
/// integrated with exact matrix-exponential substeps; kicks are applied whole.
/// A sample at t sees every event up to t including kicks that fire at t, but
/// never the next period's leading kicks, so samples at t = mT are G_F^m psi0
/// (taken from repeated application of G_F; the dense value is the drift check).
TraceSeries evolve_trace(const Schedule& schedule, std::span<const Complex> psi0,
                         std::span<const ComplexMatrix> etas, int steps_per_period, int periods,
                         std::vector<TraceLabel> labels = {});

}  // namespace intertwine
