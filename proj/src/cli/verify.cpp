#include "intertwine/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "intertwine/assignment.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/models.hpp"
#include "intertwine/numlin.hpp"
#include "intertwine/pauli.hpp"
#include "intertwine/vectorize.hpp"

namespace intertwine::cli {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

ComplexMatrix random_matrix(Rng& rng, std::size_t n, std::size_t m) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(i, j) = {g(rng), g(rng)};
  }
  return a;
}

ComplexVector random_state(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  const double s = norm2(v);
  for (auto& z : v) z /= s;
  return v;
}

// Exchange parity (antidiagonal ones) and H = (A + P conj(A) P)/2, so that
// P conj(H) P = H.
ComplexMatrix random_pt_hamiltonian(Rng& rng, std::size_t n) {
  ComplexMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
  const ComplexMatrix a = random_matrix(rng, n, n);
  return 0.5 * (a + matmul(matmul(p, conjugate(a)), p));
}

Complex expectation(const ComplexVector& psi, const ComplexMatrix& op) { return dot(psi, matvec(op, psi)); }

ComplexVector evolve(const ComplexMatrix& u, const ComplexVector& psi) { return matvec(u, psi); }

// Runs `body` and converts library failures into an infinite measurement so
// the check is reported rather than aborting the suite.
template <class F>
double guarded(F&& body) {
  try {
    return body();
  } catch (const std::exception&) {
    return kInf;
  }
}

double spectrum_pairing(const VerifyOptions& opt, std::size_t* bad_zero_modes) {
  Rng rng(opt.seed);
  double worst = 0.0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const ComplexMatrix h = random_pt_hamiltonian(rng, n);
    const ComplexMatrix l = opt.liouvillian_builder(h);
    const double d = guarded([&] {
      return matched_distance(eig(l, 1e-6).eigenvalues, predicted_rates(h)) / std::max(1.0, frobenius_norm(h));
    });
    worst = std::max(worst, d);
    if (null_space(l).size() != n) ++bad;
  }
  *bad_zero_modes = bad;
  return worst;
}

double static_exponential_law(std::uint64_t seed) {
  Rng rng(seed + 1);
  double worst = 0.0;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    for (double gamma : {0.3, 0.5, 1.5}) {
      const ComplexMatrix h = dimer_hamiltonian(model, 1.0, gamma);
      const auto res = eigen_operators(h);
      std::vector<EigenOperator> all = res.conserved;
      all.insert(all.end(), res.transient.begin(), res.transient.end());
      for (int s = 0; s < 5; ++s) {
        const ComplexVector psi0 = random_state(rng, 2);
        for (double t : {0.37, 1.3}) {
          const ComplexVector psi = evolve(matexp(Complex{0.0, -t} * h), psi0);
          for (const auto& e : all) {
            const Complex start = expectation(psi0, e.op);
            const Complex want = std::exp(e.rate * t) * start;
            const double scale = std::abs(want) + 1e-12;
            worst = std::max(worst, std::abs(expectation(psi, e.op) - want) / scale);
          }
        }
      }
    }
  }
  return worst;
}

double floquet_exponential_law(std::uint64_t seed) {
  Rng rng(seed + 2);
  double worst = 0.0;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    const DimerParams p{1.0, 0.5, 1.0, default_floquet_waveform(model)};
    const ComplexMatrix gf = propagator(dimer_schedule(model, p)).gf;
    const auto ops = floquet_eigen_operators(gf);
    for (int s = 0; s < 3; ++s) {
      const ComplexVector psi0 = random_state(rng, 2);
      for (const auto& e : ops) {
        const Complex start = expectation(psi0, e.op);
        ComplexVector psi = psi0;
        Complex lam_m = 1.0;
        for (int m = 1; m <= 50; ++m) {
          psi = evolve(gf, psi);
          lam_m *= e.rate;
          const Complex want = lam_m * start;
          worst = std::max(worst, std::abs(expectation(psi, e.op) - want) / (std::abs(want) + 1e-12));
        }
      }
    }
  }
  return worst;
}

double closed_form_grid(DimerModel model) {
  double worst = 0.0;
  for (double g : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    for (double jt : {0.5, 1.0, 2.0, 4.0}) {
      const DimerParams p{1.0, g, jt, default_floquet_waveform(model)};
      const ComplexMatrix gf = propagator(dimer_schedule(model, p)).gf;
      const auto c = analytic_floquet_coeffs(model, p);
      worst = std::max(worst, frobenius_norm(gf - compose_propagator(model, c)) / std::max(1.0, frobenius_norm(gf)));
      worst = std::max(worst, c.imag_residue);
    }
  }
  return worst;
}

double series_termination() {
  const double J = 1.0, T = 1.0;
  const DimerParams p{J, J, T, Waveform::SquareWave};
  const ComplexMatrix gf = propagator(quantum_dimer(p)).gf;
  const ComplexMatrix hp = dimer_hamiltonian(DimerModel::Quantum, J, J, 1.0);
  const ComplexMatrix hm = dimer_hamiltonian(DimerModel::Quantum, J, J, -1.0);
  const ComplexMatrix series =
      pauli::identity() + Complex{0.0, -T / 2} * (hp + hm) - (T * T / 4) * matmul(hm, hp);
  return frobenius_norm(gf - series);
}

double matexp_taylor(std::uint64_t seed) {
  Rng rng(seed + 3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 5;
    ComplexMatrix a = random_matrix(rng, n, n);
    a *= Complex{(0.05 + 0.95 * (trial + 1) / 20.0) / one_norm(a), 0.0};
    ComplexMatrix term = ComplexMatrix::identity(n), sum = term;
    for (int k = 1; k < 30; ++k) {
      term = matmul(term, a);
      term *= Complex{1.0 / k, 0.0};
      sum += term;
    }
    worst = std::max(worst, frobenius_norm(matexp(a) - sum));
  }
  return worst;
}

double vec_roundtrip_mismatches(std::uint64_t seed) {
  Rng rng(seed + 4);
  double mismatches = 0.0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const ComplexMatrix a = random_matrix(rng, n, n);
    if (!(unvec(vec(a)) == a)) mismatches += 1.0;
  }
  return mismatches;
}

double sandwich_identity(std::uint64_t seed) {
  Rng rng(seed + 5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const ComplexMatrix a = random_matrix(rng, n, n), eta = random_matrix(rng, n, n), b = random_matrix(rng, n, n);
    const auto lhs = vec(matmul(matmul(a, eta), b));
    const auto rhs = matvec(sandwich_matrix(a, b), vec(eta).data);
    double diff = 0.0;
    for (std::size_t i = 0; i < rhs.size(); ++i) diff = std::max(diff, std::abs(lhs.data[i] - rhs[i]));
    worst = std::max(worst, diff / (frobenius_norm(a) * frobenius_norm(eta) * frobenius_norm(b)));
  }
  return worst;
}

struct TimeShiftResult {
  double covariance = 0.0;
  double invariant = 0.0;
};

TimeShiftResult time_shift_checks() {
  TimeShiftResult r;
  const DimerParams p{1.0, 0.5, 1.0, Waveform::SquareWave};
  const Schedule schedule = quantum_dimer(p);
  const ComplexMatrix gf = propagator(schedule).gf;
  const auto conserved = stroboscopic_conserved(gf);
  for (double frac : {0.25, 0.5, 0.75}) {
    const TimeShift ts = time_shift(schedule, frac * p.T);
    const ComplexMatrix shifted = propagator(ts.shifted).gf;
    const ComplexMatrix expected = matmul(matmul(ts.s, gf), inverse(ts.s));
    r.covariance = std::max(r.covariance, frobenius_norm(shifted - expected) / std::max(1.0, frobenius_norm(gf)));
    for (const auto& e : conserved) {
      const ComplexMatrix moved = transform_invariant(e.op, ts.s);
      r.invariant = std::max(r.invariant, floquet_residual(moved, shifted, 1.0) / frobenius_norm(moved));
    }
  }
  return r;
}

double static_conserved_span() {
  double worst = 0.0;
  const double gamma = 0.5;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    const auto found = conserved_operators(dimer_hamiltonian(model, 1.0, gamma));
    std::vector<ComplexMatrix> numeric;
    for (const auto& e : found) numeric.push_back(e.op);
    const std::vector<ComplexMatrix> expected =
        model == DimerModel::Quantum
            ? std::vector<ComplexMatrix>{pauli::x(), pauli::identity() + gamma * pauli::y()}
            : std::vector<ComplexMatrix>{pauli::y(), pauli::identity() - gamma * pauli::x()};
    worst = std::max(worst, operator_subspace_distance(numeric, expected));
  }
  return worst;
}

double unit_multiplier_miscount() {
  double miss = 0.0;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    const DimerParams p{1.0, 0.5, 1.0, default_floquet_waveform(model)};
    const ComplexMatrix gf = propagator(dimer_schedule(model, p)).gf;
    miss += std::abs(static_cast<double>(stroboscopic_conserved(gf).size()) - 2.0);
  }
  return miss;
}

double symmetric_pairing() {
  double worst = 0.0;
  for (DimerModel model : {DimerModel::Quantum, DimerModel::Classical}) {
    const DimerParams p{1.0, 0.5, 1.0, default_floquet_waveform(model)};
    const auto ops = floquet_eigen_operators(propagator(dimer_schedule(model, p)).gf);
    const Complex l3 = ops[2].rate, l4 = ops[3].rate;
    worst = std::max({worst, std::abs(std::abs(l3) - 1.0), std::abs(std::abs(l4) - 1.0), std::abs(l4 - std::conj(l3))});
  }
  return worst;
}

}  // namespace

VerifyReport run_verify_suite(const VerifyOptions& options) {
  VerifyOptions opt = options;
  if (!opt.liouvillian_builder) opt.liouvillian_builder = build_liouvillian;
  VerifyReport report;
  auto add = [&](std::string name, double measured, double threshold) {
    if (opt.tolerance_override) threshold = *opt.tolerance_override;
    report.checks.push_back({std::move(name), measured, threshold, measured <= threshold});
  };

  std::size_t bad_zero_modes = 0;
  add("spectrum pairing (random PT-symmetric H)", spectrum_pairing(opt, &bad_zero_modes), 1e-7);
  add("zero-mode count = N (random PT-symmetric H)", static_cast<double>(bad_zero_modes), 0.0);
  add("static exponential law", guarded([&] { return static_exponential_law(opt.seed); }), 1e-7);
  add("Floquet exponential law (m <= 50)", guarded([&] { return floquet_exponential_law(opt.seed); }), 1e-6);
  add("static conserved span (dimers)", guarded(static_conserved_span), 1e-8);
  add("PT symmetry of H1 under sigma_x", guarded([] {
        return verify_pt_symmetry(dimer_hamiltonian(DimerModel::Quantum, 1.0, 0.5), pauli::x());
      }),
      1e-12);
  add("closed-form propagator, quantum", guarded([] { return closed_form_grid(DimerModel::Quantum); }), 1e-10);
  add("closed-form propagator, classical", guarded([] { return closed_form_grid(DimerModel::Classical); }), 1e-10);
  add("Hermitian limit, classical", guarded([] {
        const DimerParams p{1.0, 0.0, 1.0, Waveform::DeltaKicks};
        return frobenius_norm(propagator(classical_dimer(p)).gf - matexp(Complex{0.0, -1.0} * pauli::y()));
      }),
      1e-10);
  add("series termination at gamma = J", guarded(series_termination), 1e-10);
  add("unit multipliers = 2 (dimers)", guarded(unit_multiplier_miscount), 0.0);
  add("symmetric-phase multiplier pairing", guarded(symmetric_pairing), 1e-9);

  const TimeShiftResult ts = [] {
    try {
      return time_shift_checks();
    } catch (const std::exception&) {
      return TimeShiftResult{kInf, kInf};
    }
  }();
  add("time-shift covariance", ts.covariance, 1e-9);
  add("time-shifted invariant", ts.invariant, 1e-8);

  // Which printed form of the classical second invariant is right.
  double text_diff = kInf, caption_diff = kInf;
  try {
    const DimerParams p{1.0, 0.5, 1.0, Waveform::DeltaKicks};
    const ComplexMatrix gf = propagator(classical_dimer(p)).gf;
    const auto c = analytic_floquet_coeffs(DimerModel::Classical, p);
    const ComplexMatrix target = Complex{0.0, -0.5} * (matmul(pauli::y(), gf) - matmul(adjoint(gf), pauli::y()));
    text_diff = frobenius_norm(target - analytic_second_invariant(DimerModel::Classical, c));
    caption_diff = frobenius_norm(target - (c.gy * pauli::identity() + c.gx * pauli::z() - c.gz * pauli::x()));
  } catch (const std::exception&) {
  }
  const bool text_ok = text_diff <= 1e-10, caption_ok = caption_diff <= 1e-10;
  report.eta2_form = text_ok ? (caption_ok ? "both" : "text") : (caption_ok ? "caption" : "neither");
  add("classical eta2 = Gy 1 + Gz sx - Gx sz", text_diff, 1e-10);

  add("basis rotation H1 -> H2", guarded([] { return basis_rotation_check(DimerParams{1.0, 0.5, 1.0}); }), 1e-14);
  add("matexp vs 30-term Taylor", guarded([&] { return matexp_taylor(opt.seed); }), 1e-10);
  add("vec/unvec round trip (mismatches)", guarded([&] { return vec_roundtrip_mismatches(opt.seed); }), 0.0);
  add("Kronecker sandwich identity", guarded([&] { return sandwich_identity(opt.seed); }), 1e-12);
  return report;
}

void print_verify_table(const VerifyReport& report, std::ostream& os) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %-12s  %-12s  %s\n", static_cast<int>(width), "check", "measured", "threshold",
                "result");
  os << buf;
  for (const auto& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%-*s  %-12.3e  %-12.3e  %s\n", static_cast<int>(width), c.name.c_str(), c.measured,
                  c.threshold, c.passed ? "PASS" : "FAIL");
    os << buf;
  }
  os << "classical eta2 printed form matching the recursive construction: " << report.eta2_form << "\n";
  os << (report.all_passed() ? "all checks passed" : "verify FAILED") << "\n";
}

}  // namespace intertwine::cli
