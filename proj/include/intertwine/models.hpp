#pragma once

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/floquet.hpp"
#include "intertwine/operators.hpp"

namespace intertwine {

// Two PT-symmetric dimers with gain/loss i*gamma*f(t)*sigma_z:
//   quantum:   H1 = J sigma_x + i gamma f(t) sigma_z   (parity sigma_x)
//   classical: H2 = J sigma_y + i gamma f(t) sigma_z   (H2 = -conj(H2))
enum class DimerModel { Quantum, Classical };
enum class Waveform { Static, SquareWave, DeltaKicks };

std::string_view to_string(DimerModel model);
std::string_view to_string(Waveform waveform);
std::optional<DimerModel> parse_model(std::string_view name);        // "quantum-dimer" | "classical-dimer"
std::optional<Waveform> parse_waveform(std::string_view name);       // "static" | "square" | "kicks"
Waveform default_floquet_waveform(DimerModel model);

struct DimerParams {
  double J = 1.0;
  double gamma = 0.5;
  double T = 1.0;
  Waveform waveform = Waveform::Static;

  // sqrt(J^2 - gamma^2) as a principal complex root: real below the PT
  // threshold, purely imaginary above it.
  Complex delta() const;
  void validate() const;
};

// J sigma + i sign*gamma sigma_z with sigma = sigma_x (quantum) or sigma_y.
ComplexMatrix dimer_hamiltonian(DimerModel model, double J, double gamma, double sign = 1.0);

/// Static: one segment of H1. SquareWave: H1+ for T/2 then H1- for T/2.
/// DeltaKicks is rejected.
Schedule quantum_dimer(const DimerParams& p);

/// Static: one segment of H2. DeltaKicks: the period is laid out as
/// segment(T/2, J sigma_y), kick(-gamma T sigma_z), segment(T/2, J sigma_y),
/// kick(+gamma T sigma_z); the kick at t = 0 is booked at the end of the period
/// so the product reads e^{+gT sz} e^{-iJT sy/2} e^{-gT sz} e^{-iJT sy/2}.
/// SquareWave is rejected.
Schedule classical_dimer(const DimerParams& p);

Schedule dimer_schedule(DimerModel model, const DimerParams& p);

// The parity-type intertwiner that seeds the recursive construction:
// sigma_x for the quantum dimer, sigma_y for the classical one.
ComplexMatrix seed_intertwiner(DimerModel model);

struct EtaPair {
  ComplexMatrix eta_plus, eta_minus;
  Complex rate_plus, rate_minus;  // +-2i Delta
};

/// Closed-form rank-1 eigen-operators of the static Liouvillian:
///   quantum   (1/J^2) [[a^2, -i a], [i a, 1]]
///   classical (1/J^2) [[a^2, -a], [-a, 1]]       a = gamma +- i Delta
/// Throws InvalidInput at the exceptional point (Delta = 0).
EtaPair analytic_eta_pm(DimerModel model, const DimerParams& p);

/// Real propagator coefficients. Quantum: G0 1 + i Gx sx + Gy sy (gz = 0).
/// Classical: G0 1 + Gx sx + i Gy sy + Gz sz. Evaluated with complex Delta;
/// `imag_residue` is the largest imaginary part discarded. Near Delta = 0 the
/// quantum forms switch to their Taylor series in Delta^2.
struct FloquetCoefficients {
  double g0 = 0.0, gx = 0.0, gy = 0.0, gz = 0.0;
  double imag_residue = 0.0;
};

FloquetCoefficients analytic_floquet_coeffs(DimerModel model, const DimerParams& p);
ComplexMatrix compose_propagator(DimerModel model, const FloquetCoefficients& c);

// Second stroboscopic invariant in closed form: Gx 1 + Gy sz (quantum),
// Gy 1 + Gz sx - Gx sz (classical).
ComplexMatrix analytic_second_invariant(DimerModel model, const FloquetCoefficients& c);

/// Positive on the PT-symmetric side, zero on the EP contour:
///   quantum   Gx^2 - Gy^2
///   classical Gy^2 - Gx^2 - Gz^2   (vanishes where cos(JT/2) = tanh(gamma T))
/// For the Static waveform: J^2 - gamma^2.
double ep_discriminant(DimerModel model, const DimerParams& p);

struct ScanAxis {
  double min = 0.0, max = 1.0;
  int points = 2;
  double at(int k) const { return points < 2 ? min : min + (max - min) * k / (points - 1); }
};

struct ContourPoint {
  double gamma_over_J = 0.0;
  double JT = 0.0;
  bool cross_validated = false;  // numerical phase flips Symmetric <-> Broken across it
};

/// Bisects ep_discriminant in gamma/J on [lo, hi] at fixed JT (to 1e-13).
/// Throws InvalidInput when the bracket has no sign change.
double bisect_ep(DimerModel model, Waveform waveform, double JT, double lo, double hi, double J = 1.0);

/// Bisects the numerical |kappa| dichotomy of the propagator (Symmetric vs
/// anything else) in gamma/J on [lo, hi]; throws if both ends agree.
double numerical_ep_root(DimerModel model, Waveform waveform, double JT, double lo, double hi,
                         double tol = 1e-12, double J = 1.0);

/// For each JT on `jt_axis`, scan gamma/J on `gamma_axis` for sign changes of the
/// analytic discriminant, refine each by bisection and cross-check the numerical
/// phase 1e-6 either side.
std::vector<ContourPoint> ep_contour(DimerModel model, Waveform waveform, const ScanAxis& gamma_axis,
                                     const ScanAxis& jt_axis, double J = 1.0);

/// ||e^{-i pi sz/4} H1 e^{+i pi sz/4} - H2||_F, maximised over the two signs of
/// the gain/loss term.
double basis_rotation_check(const DimerParams& p);

// e^{-i pi sigma_z / 4}
ComplexMatrix basis_rotation();

inline ComplexVector plus_x_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h};
}

}  // namespace intertwine
