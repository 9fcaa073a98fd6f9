#include "intertwine/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/liouvillian.hpp"
#include "intertwine/pauli.hpp"

namespace intertwine {

std::string_view to_string(DimerModel model) {
  return model == DimerModel::Quantum ? "quantum-dimer" : "classical-dimer";
}

std::string_view to_string(Waveform waveform) {
  switch (waveform) {
    case Waveform::Static: return "static";
    case Waveform::SquareWave: return "square";
    case Waveform::DeltaKicks: return "kicks";
  }
  return "unknown";
}

std::optional<DimerModel> parse_model(std::string_view name) {
  if (name == "quantum-dimer") return DimerModel::Quantum;
  if (name == "classical-dimer") return DimerModel::Classical;
  return std::nullopt;
}

std::optional<Waveform> parse_waveform(std::string_view name) {
  if (name == "static") return Waveform::Static;
  if (name == "square") return Waveform::SquareWave;
  if (name == "kicks") return Waveform::DeltaKicks;
  return std::nullopt;
}

Waveform default_floquet_waveform(DimerModel model) {
  return model == DimerModel::Quantum ? Waveform::SquareWave : Waveform::DeltaKicks;
}

Complex DimerParams::delta() const { return std::sqrt(Complex{J * J - gamma * gamma, 0.0}); }

void DimerParams::validate() const {
  if (!(J > 0.0) || !std::isfinite(J)) throw InvalidInput("dimer: J must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidInput("dimer: gamma must be non-negative");
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("dimer: T must be positive");
}

ComplexMatrix dimer_hamiltonian(DimerModel model, double J, double gamma, double sign) {
  ComplexMatrix h = J * (model == DimerModel::Quantum ? pauli::x() : pauli::y());
  h += Complex{0.0, sign * gamma} * pauli::z();
  return h;
}

Schedule quantum_dimer(const DimerParams& p) {
  p.validate();
  const auto model = DimerModel::Quantum;
  switch (p.waveform) {
    case Waveform::Static:
      return Schedule(2, p.T, {Segment{p.T, dimer_hamiltonian(model, p.J, p.gamma)}});
    case Waveform::SquareWave:
      return Schedule(2, p.T,
                      {Segment{p.T / 2, dimer_hamiltonian(model, p.J, p.gamma, +1.0)},
                       Segment{p.T / 2, dimer_hamiltonian(model, p.J, p.gamma, -1.0)}});
    case Waveform::DeltaKicks: break;
  }
  throw InvalidInput("quantum-dimer: delta-kick waveform is only defined for the classical dimer");
}

Schedule classical_dimer(const DimerParams& p) {
  p.validate();
  const auto model = DimerModel::Classical;
  switch (p.waveform) {
    case Waveform::Static:
      return Schedule(2, p.T, {Segment{p.T, dimer_hamiltonian(model, p.J, p.gamma)}});
    case Waveform::DeltaKicks: {
      const ComplexMatrix coupling = p.J * pauli::y();
      const ComplexMatrix kick = (p.gamma * p.T) * pauli::z();
      return Schedule(2, p.T,
                      {Segment{p.T / 2, coupling}, Kick{-kick}, Segment{p.T / 2, coupling}, Kick{kick}});
    }
    case Waveform::SquareWave: break;
  }
  throw InvalidInput("classical-dimer: square-wave waveform is not defined for this model");
}

Schedule dimer_schedule(DimerModel model, const DimerParams& p) {
  return model == DimerModel::Quantum ? quantum_dimer(p) : classical_dimer(p);
}

ComplexMatrix seed_intertwiner(DimerModel model) {
  return model == DimerModel::Quantum ? pauli::x() : pauli::y();
}

EtaPair analytic_eta_pm(DimerModel model, const DimerParams& p) {
  p.validate();
  const Complex delta = p.delta();
  if (std::abs(delta) <= 1e-12 * p.J) {
    throw InvalidInput("analytic_eta_pm: closed forms degenerate at the exceptional point gamma = J");
  }
  auto build = [&](Complex a) {
    const double inv = 1.0 / (p.J * p.J);
    if (model == DimerModel::Quantum) {
      return ComplexMatrix{{a * a * inv, -kI * a * inv}, {kI * a * inv, inv}};
    }
    return ComplexMatrix{{a * a * inv, -a * inv}, {-a * inv, inv}};
  };
  return {build(p.gamma + kI * delta), build(p.gamma - kI * delta), 2.0 * kI * delta, -2.0 * kI * delta};
}

namespace {

// cos(D T), sin(D T)/D and (1 - cos(D T))/D^2 as power series in x = D^2. Each
// is entire in x, so the series is exact through D = 0.
struct SeriesTriple {
  double c = 0.0, s = 0.0, k = 0.0;
};

SeriesTriple delta_series(double x, double T) {
  SeriesTriple out;
  double term_c = 1.0;       // (-x)^n T^{2n} / (2n)!
  double term_s = T;         // (-x)^n T^{2n+1} / (2n+1)!
  double term_k = T * T / 2; // (-x)^n T^{2n+2} / (2n+2)!
  for (int n = 0; n < 30; ++n) {
    out.c += term_c;
    out.s += term_s;
    out.k += term_k;
    const double a = 2.0 * n + 1, b = 2.0 * n + 2, c = 2.0 * n + 3, d = 2.0 * n + 4;
    term_c *= -x * T * T / (a * b);
    term_s *= -x * T * T / (b * c);
    term_k *= -x * T * T / (c * d);
  }
  return out;
}

FloquetCoefficients quantum_coeffs(const DimerParams& p) {
  const double J = p.J, g = p.gamma, T = p.T;
  const Complex delta = p.delta();
  FloquetCoefficients out;
  if (std::abs(delta) * T < 0.1) {
    const auto s = delta_series(J * J - g * g, T);
    out.g0 = 1.0 - J * J * s.k;
    out.gx = -J * s.s;
    out.gy = -J * g * s.k;
    return out;
  }
  const Complex d2 = delta * delta;
  const Complex cos_dt = std::cos(delta * T);
  const Complex g0 = (J * J * cos_dt - g * g) / d2;
  const Complex gx = -J * std::sin(delta * T) / delta;
  const Complex gy = -J * g * (1.0 - cos_dt) / d2;
  out.g0 = g0.real();
  out.gx = gx.real();
  out.gy = gy.real();
  out.imag_residue = std::max({std::abs(g0.imag()), std::abs(gx.imag()), std::abs(gy.imag())});
  return out;
}

FloquetCoefficients classical_coeffs(const DimerParams& p) {
  const double half = p.J * p.T / 2;
  const double ch = std::cosh(2 * p.gamma * p.T), sh = std::sinh(2 * p.gamma * p.T);
  const double s2 = std::sin(half) * std::sin(half);
  FloquetCoefficients out;
  out.g0 = std::cos(half) * std::cos(half) - s2 * ch;
  out.gx = -std::sin(p.J * p.T) * sh / 2;
  out.gy = -std::sin(p.J * p.T) * (1 + ch) / 2;
  out.gz = -s2 * sh;
  return out;
}

}  // namespace

FloquetCoefficients analytic_floquet_coeffs(DimerModel model, const DimerParams& p) {
  p.validate();
  if (model == DimerModel::Quantum) {
    if (p.waveform != Waveform::SquareWave) {
      throw InvalidInput("analytic_floquet_coeffs: quantum dimer closed form needs the square waveform");
    }
    return quantum_coeffs(p);
  }
  if (p.waveform != Waveform::DeltaKicks) {
    throw InvalidInput("analytic_floquet_coeffs: classical dimer closed form needs the kicks waveform");
  }
  return classical_coeffs(p);
}

ComplexMatrix compose_propagator(DimerModel model, const FloquetCoefficients& c) {
  ComplexMatrix g = c.g0 * pauli::identity();
  if (model == DimerModel::Quantum) {
    g += Complex{0.0, c.gx} * pauli::x();
    g += c.gy * pauli::y();
  } else {
    g += c.gx * pauli::x();
    g += Complex{0.0, c.gy} * pauli::y();
    g += c.gz * pauli::z();
  }
  return g;
}

ComplexMatrix analytic_second_invariant(DimerModel model, const FloquetCoefficients& c) {
  if (model == DimerModel::Quantum) return c.gx * pauli::identity() + c.gy * pauli::z();
  return c.gy * pauli::identity() + c.gz * pauli::x() - c.gx * pauli::z();
}

double ep_discriminant(DimerModel model, const DimerParams& p) {
  if (p.waveform == Waveform::Static) return p.J * p.J - p.gamma * p.gamma;
  const auto c = analytic_floquet_coeffs(model, p);
  if (model == DimerModel::Quantum) return c.gx * c.gx - c.gy * c.gy;
  return c.gy * c.gy - c.gx * c.gx - c.gz * c.gz;
}

namespace {

DimerParams params_at(double J, double gamma_over_J, double JT, Waveform waveform) {
  return DimerParams{J, gamma_over_J * J, JT / J, waveform};
}

bool numerically_symmetric(DimerModel model, Waveform waveform, double J, double gamma_over_J, double JT) {
  const DimerParams p = params_at(J, gamma_over_J, JT, waveform);
  if (waveform == Waveform::Static) {
    return classify_pt_phase(dimer_hamiltonian(model, p.J, p.gamma)) == PtPhase::Symmetric;
  }
  return propagator(dimer_schedule(model, p)).phase == PtPhase::Symmetric;
}

}  // namespace

double bisect_ep(DimerModel model, Waveform waveform, double JT, double lo, double hi, double J) {
  auto f = [&](double g) { return ep_discriminant(model, params_at(J, g, JT, waveform)); };
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InvalidInput("bisect_ep: no sign change of the discriminant on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] at JT=" + std::to_string(JT));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double numerical_ep_root(DimerModel model, Waveform waveform, double JT, double lo, double hi, double tol,
                         double J) {
  const bool slo = numerically_symmetric(model, waveform, J, lo, JT);
  const bool shi = numerically_symmetric(model, waveform, J, hi, JT);
  if (slo == shi) {
    throw InvalidInput("numerical_ep_root: phase does not change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] at JT=" + std::to_string(JT));
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (numerically_symmetric(model, waveform, J, mid, JT) == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<ContourPoint> ep_contour(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis,
                                     const ScanAxis& jt_axis, double J) {
  if (!(gamma_axis.min >= 0.0) || !(gamma_axis.max > gamma_axis.min) || !(jt_axis.min > 0.0) ||
      !(jt_axis.max >= jt_axis.min)) {
    throw InvalidInput("ep_contour: grid bounds must be positive and increasing");
  }
  std::vector<ContourPoint> points;
  for (int r = 0; r < jt_axis.points; ++r) {
    const double jt = jt_axis.at(r);
    double prev_g = gamma_axis.at(0);
    double prev_f = ep_discriminant(model, params_at(J, prev_g, jt, waveform));
    for (int c = 1; c < gamma_axis.points; ++c) {
      const double g = gamma_axis.at(c);
      const double f = ep_discriminant(model, params_at(J, g, jt, waveform));
      if ((prev_f > 0.0) != (f > 0.0)) {
        const double root = bisect_ep(model, waveform, jt, prev_g, g, J);
        const double step = 1e-6;
        const bool below = numerically_symmetric(model, waveform, J, std::max(0.0, root - step), jt);
        const bool above = numerically_symmetric(model, waveform, J, root + step, jt);
        points.push_back({root, jt, below != above});
      }
      prev_g = g;
      prev_f = f;
    }
  }
  return points;
}

ComplexMatrix basis_rotation() { return matexp(Complex{0.0, -M_PI / 4} * pauli::z()); }

double basis_rotation_check(const DimerParams& p) {
  p.validate();
  const ComplexMatrix r = basis_rotation();
  const ComplexMatrix r_inv = matexp(Complex{0.0, M_PI / 4} * pauli::z());
  double worst = 0.0;
  for (double sign : {1.0, -1.0}) {
    const ComplexMatrix rotated =
        matmul(matmul(r, dimer_hamiltonian(DimerModel::Quantum, p.J, p.gamma, sign)), r_inv);
    worst = std::max(worst,
                     frobenius_norm(rotated - dimer_hamiltonian(DimerModel::Classical, p.J, p.gamma, sign)));
  }
  return worst;
}

}  // namespace intertwine
