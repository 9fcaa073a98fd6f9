#include <doctest.h>

#include <cmath>

#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/models.hpp"
#include "intertwine/pauli.hpp"
#include "test_support.hpp"

using namespace intertwine;

TEST_CASE("model and waveform names") {
  CHECK(parse_model("quantum-dimer") == DimerModel::Quantum);
  CHECK(parse_model("classical-dimer") == DimerModel::Classical);
  CHECK_FALSE(parse_model("dimer").has_value());
  CHECK(parse_waveform("kicks") == Waveform::DeltaKicks);
  CHECK(to_string(Waveform::SquareWave) == "square");
  CHECK(to_string(DimerModel::Classical) == "classical-dimer");
}

TEST_CASE("parameter validation and waveform restrictions") {
  CHECK_THROWS_AS(quantum_dimer(DimerParams{0.0, 0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(quantum_dimer(DimerParams{1.0, -0.5, 1.0}), InvalidInput);
  CHECK_THROWS_AS(quantum_dimer(DimerParams{1.0, 0.5, 0.0}), InvalidInput);
  CHECK_THROWS_AS(quantum_dimer(DimerParams{1.0, 0.5, 1.0, Waveform::DeltaKicks}), InvalidInput);
  CHECK_THROWS_AS(classical_dimer(DimerParams{1.0, 0.5, 1.0, Waveform::SquareWave}), InvalidInput);
  CHECK_THROWS_AS(analytic_floquet_coeffs(DimerModel::Quantum, DimerParams{1.0, 0.5, 1.0, Waveform::Static}),
                  InvalidInput);
}

TEST_CASE("delta is the principal complex root") {
  CHECK(std::abs(DimerParams{1.0, 0.5, 1.0}.delta() - std::sqrt(0.75)) < 1e-15);
  const Complex d = DimerParams{1.0, 1.5, 1.0}.delta();
  CHECK(d.real() == 0.0);
  CHECK(d.imag() == doctest::Approx(std::sqrt(1.25)));
}

TEST_CASE("static spectra and Hermitian limit") {
  const auto s = eig(dimer_hamiltonian(DimerModel::Quantum, 1.0, 0.5));
  for (const auto& e : s.eigenvalues) CHECK(std::abs(std::abs(e) - std::sqrt(0.75)) < 1e-12);
  const auto gf = propagator(quantum_dimer(DimerParams{1.0, 0.0, 0.8, Waveform::SquareWave})).gf;
  CHECK(itest::max_abs_diff(gf, matexp(Complex{0, -0.8} * pauli::x())) < 1e-14);
}

TEST_CASE("closed-form Floquet coefficients") {
  SUBCASE("quantum") {
    const DimerParams p{1.0, 0.5, 1.0, Waveform::SquareWave};
    const auto c = analytic_floquet_coeffs(DimerModel::Quantum, p);
    CHECK(c.g0 == doctest::Approx(0.5304791264699428).epsilon(1e-13));
    CHECK(c.gx == doctest::Approx(-0.8796046606571579).epsilon(1e-13));
    CHECK(c.gy == doctest::Approx(-0.2347604367650287).epsilon(1e-13));
    CHECK(c.imag_residue == 0.0);
    const double kappa_im = std::sqrt(c.gx * c.gx - c.gy * c.gy);
    CHECK(std::hypot(c.g0, kappa_im) == doctest::Approx(1.0).epsilon(1e-12));
    const auto gf = propagator(quantum_dimer(p)).gf;
    CHECK(itest::max_abs_diff(gf, compose_propagator(DimerModel::Quantum, c)) < 1e-13);
  }
  SUBCASE("classical") {
    const DimerParams p{1.0, 0.5, 1.0, Waveform::DeltaKicks};
    const auto c = analytic_floquet_coeffs(DimerModel::Classical, p);
    CHECK(c.g0 == doctest::Approx(0.41547584809202254).epsilon(1e-13));
    CHECK(c.gx == doctest::Approx(-0.49444885288143253).epsilon(1e-13));
    CHECK(c.gy == doctest::Approx(-1.069964283111937).epsilon(1e-13));
    CHECK(c.gz == doctest::Approx(-0.2701186394295327).epsilon(1e-13));
    const auto gf = propagator(classical_dimer(p)).gf;
    CHECK(itest::max_abs_diff(gf, compose_propagator(DimerModel::Classical, c)) < 1e-13);
    const ComplexMatrix literal =
        matmul(matmul(matmul(matexp(0.5 * pauli::z()), matexp(Complex{0, -0.5} * pauli::y())),
                      matexp(-0.5 * pauli::z())),
               matexp(Complex{0, -0.5} * pauli::y()));
    CHECK(itest::max_abs_diff(gf, literal) < 1e-14);
  }
  SUBCASE("broken side stays real") {
    const auto c = analytic_floquet_coeffs(DimerModel::Quantum, DimerParams{1.0, 1.7, 2.3, Waveform::SquareWave});
    CHECK(c.imag_residue <= 1e-12);
  }
}

TEST_CASE("series branch is continuous through gamma = J") {
  for (double jt : {0.5, 1.0, 3.0}) {
    const auto at = [&](double g) {
      return analytic_floquet_coeffs(DimerModel::Quantum, DimerParams{1.0, g, jt, Waveform::SquareWave});
    };
    const auto c0 = at(1.0);
    CHECK(c0.g0 == doctest::Approx(1.0 - jt * jt / 2).epsilon(1e-14));
    for (double eps : {1e-9, 1e-4, 3e-3}) {
      for (double g : {1.0 - eps, 1.0 + eps}) {
        const auto c = at(g);
        const auto gf = propagator(quantum_dimer(DimerParams{1.0, g, jt, Waveform::SquareWave})).gf;
        CHECK(itest::max_abs_diff(gf, compose_propagator(DimerModel::Quantum, c)) < 1e-12);
      }
    }
  }
}

TEST_CASE("analytic eta pair") {
  const DimerParams p{1.0, 0.5, 1.0};
  const double d = std::sqrt(0.75);
  const auto q = analytic_eta_pm(DimerModel::Quantum, p);
  const ComplexMatrix q_expected{{Complex{-0.5, d}, Complex{d, -0.5}}, {Complex{-d, 0.5}, 1.0}};
  CHECK(itest::max_abs_diff(q.eta_plus, q_expected) < 1e-15);
  CHECK(std::abs(q.rate_plus - Complex{0, 2 * d}) < 1e-15);
  const auto c = analytic_eta_pm(DimerModel::Classical, p);
  const ComplexMatrix c_expected{{Complex{-0.5, d}, Complex{-0.5, -d}}, {Complex{-0.5, -d}, 1.0}};
  CHECK(itest::max_abs_diff(c.eta_plus, c_expected) < 1e-15);
  const auto broken = analytic_eta_pm(DimerModel::Quantum, DimerParams{1.0, 1.5, 1.0});
  CHECK(is_hermitian(broken.eta_plus, 1e-12));
  CHECK(is_hermitian(broken.eta_minus, 1e-12));
}

TEST_CASE("second invariant of the classical dimer follows the recursive construction") {
  for (double g : {0.2, 0.5, 1.1}) {
    const DimerParams p{1.0, g, 1.3, Waveform::DeltaKicks};
    const auto gf = propagator(classical_dimer(p)).gf;
    const auto c = analytic_floquet_coeffs(DimerModel::Classical, p);
    const ComplexMatrix target = Complex{0, -0.5} * (matmul(pauli::y(), gf) - matmul(adjoint(gf), pauli::y()));
    CHECK(itest::max_abs_diff(target, analytic_second_invariant(DimerModel::Classical, c)) < 1e-13);
    CHECK(floquet_residual(analytic_second_invariant(DimerModel::Classical, c), gf, 1.0) < 1e-12);
  }
}

TEST_CASE("EP contours") {
  SUBCASE("classical at JT = 1") {
    const double g = bisect_ep(DimerModel::Classical, Waveform::DeltaKicks, 1.0, 1.0, 2.0);
    CHECK(std::abs(g - 1.3651517644503206) < 1e-10);
    CHECK(std::abs(g - std::atanh(std::cos(0.5))) < 1e-10);
    const double n = numerical_ep_root(DimerModel::Classical, Waveform::DeltaKicks, 1.0, 1.0, 2.0);
    CHECK(std::abs(n - g) < 1e-6);
  }
  SUBCASE("static") {
    CHECK(std::abs(bisect_ep(DimerModel::Quantum, Waveform::Static, 1.0, 0.5, 1.5) - 1.0) < 1e-12);
  }
  SUBCASE("no sign change") {
    CHECK_THROWS_AS(bisect_ep(DimerModel::Classical, Waveform::DeltaKicks, 1.0, 0.0, 0.5), InvalidInput);
    CHECK_THROWS_AS(numerical_ep_root(DimerModel::Classical, Waveform::DeltaKicks, 1.0, 0.0, 0.5), InvalidInput);
  }
  SUBCASE("contour scan") {
    const auto pts = ep_contour(DimerModel::Classical, Waveform::DeltaKicks, ScanAxis{0.0, 2.0, 21},
                                ScanAxis{0.5, 3.0, 6});
    REQUIRE(!pts.empty());
    for (const auto& pt : pts) {
      CHECK(pt.cross_validated);
      CHECK(std::tanh(pt.gamma_over_J * pt.JT) == doctest::Approx(std::abs(std::cos(pt.JT / 2))).epsilon(1e-9));
    }
    const auto q = ep_contour(DimerModel::Quantum, Waveform::SquareWave, ScanAxis{0.0, 2.0, 41}, ScanAxis{0.5, 4.0, 8});
    REQUIRE(!q.empty());
    for (const auto& pt : q) {
      CHECK(pt.cross_validated);
      const auto c = analytic_floquet_coeffs(DimerModel::Quantum, DimerParams{1.0, pt.gamma_over_J, pt.JT, Waveform::SquareWave});
      CHECK(std::abs(std::abs(c.gx) - std::abs(c.gy)) < 1e-9);
    }
    const auto st = ep_contour(DimerModel::Quantum, Waveform::Static, ScanAxis{0.0, 2.0, 8}, ScanAxis{0.5, 3.0, 4});
    REQUIRE(st.size() == 4);
    for (const auto& pt : st) CHECK(std::abs(pt.gamma_over_J - 1.0) < 1e-12);
    CHECK_THROWS_AS(ep_contour(DimerModel::Quantum, Waveform::Static, ScanAxis{0.0, 2.0, 8}, ScanAxis{0.0, 3.0, 4}),
                    InvalidInput);
  }
}

TEST_CASE("basis rotation between the two dimers") {
  for (double g : {0.0, 0.5, 1.0, 3.0}) CHECK(basis_rotation_check(DimerParams{1.0, g, 1.0}) < 1e-14);
  const auto r = basis_rotation();
  const auto h2 = dimer_hamiltonian(DimerModel::Classical, 1.0, 0.5);
  const auto mapped = matmul(matmul(r, pauli::x()), adjoint(r));
  CHECK(verify_intertwining(mapped, h2) < 1e-14);
  CHECK(itest::max_abs_diff(matmul(r, adjoint(r)), ComplexMatrix::identity(2)) < 1e-15);
}
