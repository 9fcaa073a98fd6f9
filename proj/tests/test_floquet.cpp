#include <doctest.h>

#include <cmath>

#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/models.hpp"
#include "intertwine/pauli.hpp"
#include "intertwine/vectorize.hpp"
#include "test_support.hpp"

using namespace intertwine;

namespace {

const Complex kQuantumLambda3{-0.437183792759373, 0.8993721873332134};
const Complex kClassicalLambda3{-0.65475964, 0.755837162};

FloquetPropagator fig_config(DimerModel model, double gamma = 0.5, double jt = 1.0) {
  return propagator(dimer_schedule(model, DimerParams{1.0, gamma, jt, default_floquet_waveform(model)}));
}

std::vector<ComplexMatrix> ops_of(const std::vector<EigenOperator>& v, std::size_t n) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(v[i].op);
  return out;
}

}  // namespace

TEST_CASE("schedule validation") {
  const auto h = pauli::x();
  CHECK_THROWS_AS(Schedule(2, 1.0, {Segment{0.4, h}}), InvalidInput);
  CHECK_THROWS_AS(Schedule(2, 1.0, {Segment{-0.5, h}, Segment{1.5, h}}), InvalidInput);
  CHECK_THROWS_AS(Schedule(3, 1.0, {Segment{1.0, h}}), DimensionError);
  CHECK_THROWS_AS(Schedule(2, 0.0, {Segment{0.0, h}}), InvalidInput);
  CHECK_NOTHROW(Schedule(2, 1.0, {Kick{h}, Segment{1.0, h}}));
  const Schedule s(2, 1.0, {Segment{0.25, h}, Kick{h}, Segment{0.75, h}});
  CHECK(s.event_times() == std::vector<double>{0.0, 0.25, 0.25});
}

TEST_CASE("propagator is time ordered with the earliest event on the right") {
  const auto a = pauli::x(), b = pauli::z();
  const Schedule s(2, 1.0, {Segment{0.5, a}, Segment{0.5, b}});
  const auto expected = matmul(matexp(Complex{0, -0.5} * b), matexp(Complex{0, -0.5} * a));
  CHECK(itest::max_abs_diff(propagator(s).gf, expected) < 1e-15);
  const Schedule k(2, 1.0, {Kick{0.3 * b}, Segment{1.0, a}});
  CHECK(itest::max_abs_diff(propagator(k).gf, matmul(matexp(Complex{0, -1} * a), matexp(0.3 * b))) < 1e-15);
}

TEST_CASE("Floquet superoperator acts as G^dag eta G") {
  itest::Rng rng(31);
  const auto g = itest::random_square(rng, 3), eta = itest::random_square(rng, 3);
  const auto lhs = matvec(build_floquet_superoperator(g), vec(eta).data);
  const auto rhs = vec(matmul(matmul(adjoint(g), eta), g));
  for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs.data[i]) < 1e-13);
}

TEST_CASE("quantum dimer multipliers") {
  const auto fp = fig_config(DimerModel::Quantum);
  CHECK(fp.phase == PtPhase::Symmetric);
  const auto ops = floquet_eigen_operators(fp.gf);
  REQUIRE(ops.size() == 4);
  CHECK(std::abs(ops[0].rate - 1.0) < 1e-10);
  CHECK(std::abs(ops[1].rate - 1.0) < 1e-10);
  CHECK(std::abs(ops[2].rate - kQuantumLambda3) < 1e-10);
  CHECK(std::abs(ops[3].rate - std::conj(kQuantumLambda3)) < 1e-10);
  for (const auto& e : ops) CHECK(e.residual < 1e-10);
  const auto c = analytic_floquet_coeffs(DimerModel::Quantum, DimerParams{1.0, 0.5, 1.0, Waveform::SquareWave});
  const std::vector<ComplexMatrix> expected{pauli::x(), analytic_second_invariant(DimerModel::Quantum, c)};
  CHECK(operator_subspace_distance(ops_of(ops, 2), expected) < 1e-8);
}

TEST_CASE("classical dimer multipliers") {
  const auto fp = fig_config(DimerModel::Classical);
  const auto ops = floquet_eigen_operators(fp.gf);
  REQUIRE(ops.size() == 4);
  CHECK(stroboscopic_conserved(fp.gf).size() == 2);
  CHECK(std::abs(ops[2].rate - kClassicalLambda3) < 1e-8);
  CHECK(std::abs(ops[3].rate - std::conj(ops[2].rate)) < 1e-9);
  const auto rec = recursive_floquet(pauli::y(), fp.gf);
  CHECK(rec.antisymmetrized_independent);
  CHECK(floquet_residual(rec.antisymmetrized, fp.gf, 1.0) < 1e-12);
  CHECK_THROWS_AS(recursive_floquet(pauli::z(), fp.gf), InvalidInput);
}

TEST_CASE("unit multiplier count and phase dichotomy over a grid") {
  int broken = 0;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    for (double g : {0.2, 0.7, 1.3, 1.9}) {
      for (double jt : {0.5, 1.5, 2.5, 3.5}) {
        const DimerParams p{1.0, g, jt, default_floquet_waveform(model)};
        if (std::abs(ep_discriminant(model, p)) < 1e-3) continue;
        const auto fp = propagator(dimer_schedule(model, p));
        // Past ~1e6 the small multiplier 1/|kappa|^2 sinks below rounding of the large one.
        double big = 0.0;
        for (const auto& k : fp.kappa.eigenvalues) big = std::max(big, std::norm(k));
        if (big > 1e6) continue;
        CHECK(stroboscopic_conserved(fp.gf).size() == 2);
        const auto ops = floquet_eigen_operators(fp.gf);
        const Complex l3 = ops[2].rate, l4 = ops[3].rate;
        if (fp.phase == PtPhase::Symmetric) {
          CHECK(std::abs(std::abs(l3) - 1.0) < 1e-9);
          CHECK(std::abs(l4 - std::conj(l3)) < 1e-9);
        } else {
          ++broken;
          CHECK(std::abs(std::abs(l3 * l4) - 1.0) < 1e-9 * big);
          CHECK(std::abs(std::arg(l3) - std::arg(l4)) < 1e-9);
        }
      }
    }
  }
  CHECK(broken > 0);
}

TEST_CASE("time shift") {
  const DimerParams p{1.0, 0.5, 1.0, Waveform::SquareWave};
  const Schedule s = quantum_dimer(p);
  const auto gf = propagator(s).gf;
  for (double t0 : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9}) {
    const TimeShift ts = time_shift(s, t0);
    const auto shifted = propagator(ts.shifted).gf;
    CHECK(itest::max_abs_diff(shifted, matmul(matmul(ts.s, gf), inverse(ts.s))) < 1e-12);
    const auto moved = transform_invariant(pauli::x(), ts.s);
    CHECK(floquet_residual(moved, shifted, 1.0) < 1e-12 * frobenius_norm(moved));
  }
  CHECK(time_shift(s, 0.0).s == ComplexMatrix::identity(2));
  const Schedule kicked = classical_dimer(DimerParams{1.0, 0.5, 1.0, Waveform::DeltaKicks});
  CHECK_THROWS_AS(time_shift(kicked, 0.5), InvalidInput);
  CHECK_THROWS_AS(time_shift(s, 1.0), InvalidInput);
  CHECK_NOTHROW(time_shift(kicked, 0.25));
}

TEST_CASE("dense traces") {
  const DimerParams p{1.0, 0.5, 1.0, Waveform::SquareWave};
  const Schedule s = quantum_dimer(p);
  const auto gf = propagator(s).gf;
  const auto c = analytic_floquet_coeffs(DimerModel::Quantum, p);
  const std::vector<ComplexMatrix> etas{pauli::x(), analytic_second_invariant(DimerModel::Quantum, c)};
  const auto psi0 = plus_x_state();
  const TraceSeries t = evolve_trace(s, psi0, etas, 40, 50);
  CHECK(t.times.size() == 40 * 50 + 1);
  CHECK(t.stroboscopic_indices.size() == 51);
  CHECK(t.max_stroboscopic_drift < 1e-10);
  for (const auto& v : t.values[0]) CHECK(std::abs(v - 1.0) < 1e-8);
  for (std::size_t k : t.stroboscopic_indices) CHECK(std::abs(t.values[1][k] - 1.0) < 1e-8);
  bool oscillates = false;
  for (const auto& v : t.values[1]) oscillates |= std::abs(v - 1.0) > 1e-3;
  CHECK(oscillates);

  SUBCASE("vanishing initial expectation is flagged") {
    const Schedule cs = classical_dimer(DimerParams{1.0, 0.5, 1.0, Waveform::DeltaKicks});
    const std::vector<ComplexMatrix> sy{pauli::y()};
    const TraceSeries ct = evolve_trace(cs, psi0, sy, 20, 10);
    CHECK_FALSE(ct.normalized[0]);
    for (const auto& v : ct.values[0]) CHECK(std::abs(v) < 1e-10);
  }
  SUBCASE("bad input") {
    const ComplexVector zero(2);
    CHECK_THROWS_AS(evolve_trace(s, zero, etas, 10, 1), InvalidInput);
    CHECK_THROWS_AS(evolve_trace(s, psi0, etas, 0, 1), InvalidInput);
  }
  SUBCASE("reference curves") {
    const TraceLabel l{"x", kQuantumLambda3, false};
    CHECK(std::abs(reference_value(l, 3.0, 1.0) - std::pow(kQuantumLambda3, 3)) < 1e-12);
    const TraceLabel r{"r", Complex{0, 2}, true};
    CHECK(std::abs(reference_value(r, 0.5, 2.0) - std::exp(Complex{0, 2})) < 1e-14);
  }
}
