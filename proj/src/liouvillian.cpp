#include "intertwine/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/vectorize.hpp"

namespace intertwine {

namespace {

void require_square(const ComplexMatrix& h, const char* what) {
  if (!h.is_square()) throw DimensionError(std::string(what) + ": Hamiltonian must be square");
}

// |rate| ascending; moduli that agree to `cluster` form one group ordered by
// arg ascending, so roundoff cannot swap a conjugate pair.
void canonical_rate_sort(std::vector<EigenOperator>& ops, double cluster) {
  std::stable_sort(ops.begin(), ops.end(), [](const EigenOperator& a, const EigenOperator& b) {
    return std::abs(a.rate) < std::abs(b.rate);
  });
  std::size_t begin = 0;
  while (begin < ops.size()) {
    std::size_t end = begin + 1;
    while (end < ops.size() && std::abs(ops[end].rate) - std::abs(ops[end - 1].rate) <= cluster) ++end;
    std::stable_sort(ops.begin() + static_cast<std::ptrdiff_t>(begin), ops.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const EigenOperator& a, const EigenOperator& b) { return std::arg(a.rate) < std::arg(b.rate); });
    begin = end;
  }
}

}  // namespace

ComplexMatrix build_liouvillian(const ComplexMatrix& h) {
  require_square(h, "build_liouvillian");
  const auto id = ComplexMatrix::identity(h.rows());
  ComplexMatrix l = kron(transpose(h), id);
  l -= kron(id, adjoint(h));
  l *= Complex{0.0, -1.0};
  return l;
}

ComplexVector predicted_rates(const ComplexMatrix& h, double tol_eig) {
  require_square(h, "predicted_rates");
  const Spectrum s = eig(h, tol_eig);
  ComplexVector rates;
  rates.reserve(s.eigenvalues.size() * s.eigenvalues.size());
  for (const auto& ep : s.eigenvalues)
    for (const auto& eq : s.eigenvalues) rates.push_back(Complex{0.0, -1.0} * (ep - std::conj(eq)));
  std::sort(rates.begin(), rates.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return rates;
}

double verify_intertwining(const ComplexMatrix& eta, const ComplexMatrix& h) {
  if (!eta.is_square() || !h.is_square() || eta.rows() != h.rows()) {
    throw DimensionError("verify_intertwining: eta and H must be square with equal size");
  }
  return frobenius_norm(matmul(eta, h) - matmul(adjoint(h), eta));
}

double liouvillian_residual(const ComplexMatrix& op, const ComplexMatrix& h, Complex rate) {
  ComplexMatrix r = Complex{0.0, -1.0} * (matmul(op, h) - matmul(adjoint(h), op));
  r -= rate * op;
  return frobenius_norm(r);
}

std::vector<EigenOperator> conserved_operators(const ComplexMatrix& h, double tol_rank) {
  require_square(h, "conserved_operators");
  const auto null_vectors = null_space(build_liouvillian(h), tol_rank);
  std::vector<EigenOperator> out;
  for (auto& op : hermitian_basis(null_vectors, tol_rank)) {
    EigenOperator e;
    e.residual = liouvillian_residual(op, h, 0.0);
    e.hermitian = is_hermitian(op);
    e.op = std::move(op);
    out.push_back(std::move(e));
  }
  return out;
}

LiouvillianResult eigen_operators(const ComplexMatrix& h, const AnalysisTolerances& tol) {
  require_square(h, "eigen_operators");
  LiouvillianResult result;
  result.liouvillian = build_liouvillian(h);
  result.hamiltonian_spectrum = eig(h, tol.eig);
  result.conserved = conserved_operators(h, tol.rank);

  const Spectrum ls = eig(result.liouvillian, tol.eig);
  std::vector<std::size_t> order(ls.eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(ls.eigenvalues[a]) < std::abs(ls.eigenvalues[b]);
  });
  // The k smallest-|E| eigenpairs are the zero modes already covered by the
  // null-space basis.
  for (std::size_t idx = result.conserved.size(); idx < order.size(); ++idx) {
    const std::size_t k = order[idx];
    EigenOperator e;
    e.op = unvec(ls.eigenvectors.column(k));
    normalize_operator(e.op);
    e.rate = ls.eigenvalues[k];
    e.hermitian = is_hermitian(e.op);
    e.residual = liouvillian_residual(e.op, h, e.rate);
    result.transient.push_back(std::move(e));
  }
  canonical_rate_sort(result.transient, 1e-7 * std::max(1.0, frobenius_norm(result.liouvillian)));
  return result;
}

std::vector<ComplexMatrix> recursive_tower(const ComplexMatrix& eta1, const ComplexMatrix& h, int count,
                                           std::optional<double> scale) {
  if (count < 1) throw InvalidInput("recursive_tower: count must be >= 1");
  const double hnorm = std::max(frobenius_norm(h), 1e-300);
  const double s = scale.value_or(spectral_norm(h));
  if (!(s > 0.0)) throw InvalidInput("recursive_tower: scale must be positive");

  auto off_relation = [&](const ComplexMatrix& eta) {
    return verify_intertwining(eta, h) / (std::max(frobenius_norm(eta), 1e-300) * hnorm);
  };
  if (off_relation(eta1) > 1e-8) {
    throw InvalidInput("recursive_tower: seed operator does not intertwine H (relative residual " +
                       std::to_string(off_relation(eta1)) + ")");
  }
  std::vector<ComplexMatrix> tower;
  ComplexMatrix current = eta1;
  for (int k = 0; k < count; ++k) {
    current = matmul(current, h);
    current *= 1.0 / s;
    if (frobenius_norm(current) > 0.0 && off_relation(current) > 1e-8) {
      throw NumericalError("recursive_tower: level " + std::to_string(k + 2) +
                           " drifted off the intertwining relation");
    }
    tower.push_back(current);
  }
  return tower;
}

PtPhase classify_pt_phase(const ComplexMatrix& h, double tol) {
  require_square(h, "classify_pt_phase");
  const Spectrum s = eig(h);
  return classify_spectrum(s, std::max(frobenius_norm(h), 1e-300), tol, PhaseTest::ImaginaryParts);
}

double verify_pt_symmetry(const ComplexMatrix& h, const ComplexMatrix& parity) {
  require_square(h, "verify_pt_symmetry");
  if (!parity.is_square() || parity.rows() != h.rows()) {
    throw DimensionError("verify_pt_symmetry: parity has the wrong size");
  }
  const auto id = ComplexMatrix::identity(h.rows());
  if (frobenius_norm(matmul(parity, parity) - id) > 1e-12 * std::sqrt(static_cast<double>(h.rows()))) {
    throw InvalidInput("verify_pt_symmetry: parity operator is not an involution");
  }
  // P^-1 = P for an involution.
  return frobenius_norm(matmul(matmul(parity, conjugate(h)), parity) - h);
}

}  // namespace intertwine
