#include "intertwine/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/vectorize.hpp"

namespace intertwine {

namespace {

const ComplexMatrix& generator_of(const ScheduleEvent& e) {
  return std::visit([](const auto& ev) -> const ComplexMatrix& { return ev.generator; }, e);
}

double duration_of(const ScheduleEvent& e) {
  if (const auto* seg = std::get_if<Segment>(&e)) return seg->duration;
  return 0.0;
}

void require_square(const ComplexMatrix& gf, const char* what) {
  if (!gf.is_square()) throw DimensionError(std::string(what) + ": propagator must be square");
}

}  // namespace

Schedule::Schedule(std::size_t dim, double period, std::vector<ScheduleEvent> events)
    : dim_(dim), period_(period), events_(std::move(events)) {
  if (dim_ == 0) throw InvalidInput("Schedule: dimension must be positive");
  if (!(period_ > 0.0) || !std::isfinite(period_)) throw InvalidInput("Schedule: period must be positive");
  double total = 0.0;
  for (std::size_t k = 0; k < events_.size(); ++k) {
    const auto& g = generator_of(events_[k]);
    if (g.rows() != dim_ || g.cols() != dim_) {
      throw DimensionError("Schedule: event " + std::to_string(k) + " generator is not " +
                         std::to_string(dim_) + "x" + std::to_string(dim_));
    }
    if (const auto* seg = std::get_if<Segment>(&events_[k])) {
      if (!(seg->duration >= 0.0) || !std::isfinite(seg->duration)) {
        throw InvalidInput("Schedule: event " + std::to_string(k) + " has a negative duration");
      }
      total += seg->duration;
    }
  }
  if (std::abs(total - period_) > 1e-12 * period_) {
    throw InvalidInput("Schedule: segment durations sum to " + std::to_string(total) +
                       " but the period is " + std::to_string(period_));
  }
}

std::vector<double> Schedule::event_times() const {
  std::vector<double> times;
  times.reserve(events_.size());
  double t = 0.0;
  for (const auto& e : events_) {
    times.push_back(t);
    t += duration_of(e);
  }
  return times;
}

ComplexMatrix event_factor(const ScheduleEvent& event) {
  if (const auto* seg = std::get_if<Segment>(&event)) {
    return matexp(Complex{0.0, -seg->duration} * seg->generator);
  }
  return matexp(std::get<Kick>(event).generator);
}

FloquetPropagator propagator(const Schedule& schedule, double phase_tol) {
  ComplexMatrix gf = ComplexMatrix::identity(schedule.dim());
  for (const auto& e : schedule.events()) gf = matmul(event_factor(e), gf);
  FloquetPropagator out;
  out.kappa = eig(gf);
  out.phase = classify_spectrum(out.kappa, std::max(frobenius_norm(gf), 1e-300), phase_tol,
                                PhaseTest::Moduli);
  out.gf = std::move(gf);
  return out;
}

ComplexMatrix build_floquet_superoperator(const ComplexMatrix& gf) {
  require_square(gf, "build_floquet_superoperator");
  return kron(transpose(gf), adjoint(gf));
}

double floquet_residual(const ComplexMatrix& op, const ComplexMatrix& gf, Complex multiplier) {
  ComplexMatrix r = matmul(matmul(adjoint(gf), op), gf);
  r -= multiplier * op;
  return frobenius_norm(r);
}

std::vector<EigenOperator> stroboscopic_conserved(const ComplexMatrix& gf, double tol_rank) {
  require_square(gf, "stroboscopic_conserved");
  ComplexMatrix shifted = build_floquet_superoperator(gf);
  for (std::size_t i = 0; i < shifted.rows(); ++i) shifted(i, i) -= 1.0;
  const auto null_vectors = null_space(shifted, tol_rank);
  std::vector<EigenOperator> out;
  for (auto& op : hermitian_basis(null_vectors, tol_rank)) {
    EigenOperator e;
    e.rate = 1.0;
    e.residual = floquet_residual(op, gf, 1.0);
    e.hermitian = is_hermitian(op);
    e.op = std::move(op);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EigenOperator> floquet_eigen_operators(const ComplexMatrix& gf, const AnalysisTolerances& tol) {
  require_square(gf, "floquet_eigen_operators");
  std::vector<EigenOperator> out = stroboscopic_conserved(gf, tol.rank);
  const std::size_t conserved = out.size();

  const Spectrum s = eig(build_floquet_superoperator(gf), tol.eig);
  std::vector<std::size_t> order(s.eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto distance = [&](std::size_t k) { return std::abs(s.eigenvalues[k] - 1.0); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return distance(a) < distance(b); });

  std::vector<EigenOperator> rest;
  for (std::size_t idx = conserved; idx < order.size(); ++idx) {
    const std::size_t k = order[idx];
    EigenOperator e;
    e.op = unvec(s.eigenvectors.column(k));
    normalize_operator(e.op);
    e.rate = s.eigenvalues[k];
    e.hermitian = is_hermitian(e.op);
    e.residual = floquet_residual(e.op, gf, e.rate);
    rest.push_back(std::move(e));
  }

  // Group multipliers whose distance from 1 agrees to 1e-7 of the largest
  // modulus, then order each group by decreasing arg so conjugate pairs come out
  // as (lambda, conj(lambda)) with Im lambda > 0 first.
  double biggest = 1.0;
  for (const auto& z : s.eigenvalues) biggest = std::max(biggest, std::abs(z));
  const double cluster = 1e-7 * biggest;
  std::size_t begin = 0;
  while (begin < rest.size()) {
    std::size_t end = begin + 1;
    while (end < rest.size() &&
           std::abs(std::abs(rest[end].rate - 1.0) - std::abs(rest[end - 1].rate - 1.0)) <= cluster) {
      ++end;
    }
    std::stable_sort(rest.begin() + static_cast<std::ptrdiff_t>(begin),
                     rest.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const EigenOperator& a, const EigenOperator& b) { return std::arg(a.rate) > std::arg(b.rate); });
    begin = end;
  }

  for (auto& e : out) e.rate = hs_inner(e.op, matmul(matmul(adjoint(gf), e.op), gf));
  for (auto& e : rest) out.push_back(std::move(e));
  return out;
}

RecursiveCandidates recursive_floquet(const ComplexMatrix& eta1, const ComplexMatrix& gf) {
  require_square(gf, "recursive_floquet");
  if (!eta1.is_square() || eta1.rows() != gf.rows()) throw DimensionError("recursive_floquet: size mismatch");
  const double scale = std::max(frobenius_norm(eta1), 1e-300) * std::max(1.0, std::pow(frobenius_norm(gf), 2));
  if (floquet_residual(eta1, gf, 1.0) > 1e-8 * scale) {
    throw InvalidInput("recursive_floquet: eta1 is not stroboscopically conserved");
  }
  const ComplexMatrix right = matmul(eta1, gf);
  const ComplexMatrix left = matmul(adjoint(gf), eta1);

  RecursiveCandidates out;
  out.symmetrized = 0.5 * (right + left);
  out.antisymmetrized = Complex{0.0, -0.5} * (right - left);

  // Independent of eta1 when something survives projecting eta1 out (HS Gram).
  const double eta_norm2 = std::norm(frobenius_norm(eta1));
  auto independent = [&](const ComplexMatrix& c) {
    const Complex coeff = hs_inner(eta1, c) / eta_norm2;
    return frobenius_norm(c - coeff * eta1) > 1e-8 * scale;
  };
  out.symmetrized_independent = independent(out.symmetrized);
  out.antisymmetrized_independent = independent(out.antisymmetrized);
  return out;
}

TimeShift time_shift(const Schedule& schedule, double t0) {
  const double period = schedule.period();
  if (!(t0 >= 0.0) || !(t0 < period)) throw InvalidInput("time_shift: t0 must lie in [0, T)");
  if (t0 == 0.0) return {ComplexMatrix::identity(schedule.dim()), schedule};

  const double eps = 1e-12 * period;
  std::vector<ScheduleEvent> before, after;
  double t = 0.0;
  for (const auto& e : schedule.events()) {
    if (const auto* seg = std::get_if<Segment>(&e)) {
      const double end = t + seg->duration;
      if (end <= t0 + eps) {
        before.push_back(e);
      } else if (t >= t0 - eps) {
        after.push_back(e);
      } else {
        before.push_back(Segment{t0 - t, seg->generator});
        after.push_back(Segment{end - t0, seg->generator});
      }
      t = end;
    } else {
      if (std::abs(t - t0) <= eps) {
        throw InvalidInput("time_shift: t0 coincides with a kick; which side it belongs to is ambiguous");
      }
      (t < t0 ? before : after).push_back(e);
    }
  }

  ComplexMatrix s = ComplexMatrix::identity(schedule.dim());
  for (const auto& e : before) s = matmul(event_factor(e), s);
  std::vector<ScheduleEvent> rotated = std::move(after);
  rotated.insert(rotated.end(), before.begin(), before.end());
  return {std::move(s), Schedule(schedule.dim(), period, std::move(rotated))};
}

ComplexMatrix transform_invariant(const ComplexMatrix& eta, const ComplexMatrix& s) {
  const ComplexMatrix s_inv = inverse(s);
  return matmul(matmul(adjoint(s_inv), eta), s_inv);
}

}  // namespace intertwine
