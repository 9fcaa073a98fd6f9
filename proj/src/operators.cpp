#include "intertwine/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/vectorize.hpp"

namespace intertwine {

std::string_view to_string(PtPhase phase) {
  switch (phase) {
    case PtPhase::Symmetric: return "symmetric";
    case PtPhase::Broken: return "broken";
    case PtPhase::ExceptionalPoint: return "exceptional-point";
  }
  return "unknown";
}

double hermiticity_defect(const ComplexMatrix& a) { return frobenius_norm(a - adjoint(a)); }

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermiticity_defect(a) <= tol; }

void normalize_operator(ComplexMatrix& op) {
  const double norm = frobenius_norm(op);
  if (norm == 0.0) return;
  op *= 1.0 / norm;

  const Complex square_trace = hs_inner(adjoint(op), op);  // Tr(op op)
  if (std::abs(square_trace) >= 1.0 - 1e-10) {
    // op = e^{i theta} K with K Hermitian and Tr(op^2) = e^{2 i theta}.
    const Complex half_phase = std::sqrt(square_trace / std::abs(square_trace));
    op *= std::conj(half_phase);
    const Complex pivot = op.data()[dominant_index(op.data())];
    const double sign = std::abs(pivot.real()) >= std::abs(pivot.imag())
                            ? (pivot.real() < 0.0 ? -1.0 : 1.0)
                            : (pivot.imag() < 0.0 ? -1.0 : 1.0);
    op *= sign;
    return;
  }
  fix_phase(op.data());
}

std::vector<ComplexMatrix> hermitian_basis(std::span<const ComplexVector> null_vectors, double tol_rank) {
  std::vector<ComplexVector> candidates;
  candidates.reserve(2 * null_vectors.size());
  for (const auto& v : null_vectors) {
    const ComplexMatrix m = unvec(v);
    const ComplexMatrix md = adjoint(m);
    ComplexMatrix re = 0.5 * (m + md);
    ComplexMatrix im = Complex{0.0, -0.5} * (m - md);
    candidates.push_back(vec(re).data);
    candidates.push_back(vec(im).data);
  }
  auto basis = orthonormalize(candidates, tol_rank);
  if (basis.size() < null_vectors.size()) {
    throw NumericalError("hermitian_basis: subspace is not closed under adjoint (" +
                         std::to_string(basis.size()) + " Hermitian directions for " +
                         std::to_string(null_vectors.size()) + " basis vectors)");
  }
  // Noise can let a spurious extra direction survive near-defective points; the
  // first k span the same space whenever the check below passes.
  basis.resize(null_vectors.size());

  std::vector<ComplexMatrix> ops;
  ops.reserve(basis.size());
  for (const auto& b : basis) {
    ComplexMatrix op = unvec(b);
    op = 0.5 * (op + adjoint(op));
    normalize_operator(op);
    ops.push_back(std::move(op));
  }

  std::vector<ComplexMatrix> original;
  for (const auto& v : null_vectors) original.push_back(unvec(v));
  const double drift = operator_subspace_distance(ops, original);
  if (drift > 1e-6) {
    throw NumericalError("hermitian_basis: Hermitian basis drifted " + std::to_string(drift) +
                         " from the input subspace");
  }
  return ops;
}

double operator_subspace_distance(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b) {
  std::vector<ComplexVector> va, vb;
  for (const auto& m : a) va.push_back(vec(m).data);
  for (const auto& m : b) vb.push_back(vec(m).data);
  const auto qa = orthonormalize(va, 1e-12);
  const auto qb = orthonormalize(vb, 1e-12);
  // ||P_A - P_B||_F^2 = ||(1 - P_A) Q_B||_F^2 + ||(1 - P_B) Q_A||_F^2, summed from
  // explicit residuals so near-equal subspaces do not cancel to sqrt(eps).
  auto leak = [](const std::vector<ComplexVector>& from, const std::vector<ComplexVector>& onto) {
    double total = 0.0;
    for (const auto& x : from) {
      ComplexVector r = x;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : onto) {
          const Complex c = dot(q, r);
          for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * q[k];
        }
      }
      const double n = norm2(r);
      total += n * n;
    }
    return total;
  };
  return std::sqrt(leak(qb, qa) + leak(qa, qb));
}

double alignment(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double na = frobenius_norm(a), nb = frobenius_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::abs(hs_inner(a, b)) / (na * nb);
}

PtPhase classify_spectrum(const Spectrum& spectrum, double scale, double tol, PhaseTest test) {
  const auto& ev = spectrum.eigenvalues;
  bool collide = false;
  for (std::size_t p = 0; p < ev.size() && !collide; ++p)
    for (std::size_t q = p + 1; q < ev.size(); ++q)
      if (std::abs(ev[p] - ev[q]) <= tol * scale) collide = true;
  if (collide && condition_number(spectrum.eigenvectors) > 1.0 / tol) return PtPhase::ExceptionalPoint;

  if (test == PhaseTest::ImaginaryParts) {
    const bool real = std::all_of(ev.begin(), ev.end(),
                                  [&](Complex z) { return std::abs(z.imag()) <= tol * scale; });
    return real ? PtPhase::Symmetric : PtPhase::Broken;
  }
  double lo = INFINITY, hi = 0.0;
  for (const auto& z : ev) {
    lo = std::min(lo, std::abs(z));
    hi = std::max(hi, std::abs(z));
  }
  return (hi - lo) <= tol * hi ? PtPhase::Symmetric : PtPhase::Broken;
}

}  // namespace intertwine
