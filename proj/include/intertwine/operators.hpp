#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

enum class PtPhase { Symmetric, Broken, ExceptionalPoint };

std::string_view to_string(PtPhase phase);

inline constexpr double kDefaultPhaseTol = 1e-6;

// An operator together with its superoperator eigenvalue: a rate E for the
// static Liouvillian, a multiplier lambda for the Floquet superoperator.
struct EigenOperator {
  ComplexMatrix op;  // unit Frobenius norm, phase-fixed
  Complex rate{0.0, 0.0};
  bool hermitian = false;
  double residual = 0.0;
};

bool is_hermitian(const ComplexMatrix& a, double tol = 1e-10);
double hermiticity_defect(const ComplexMatrix& a);

/// Unit Frobenius norm plus a deterministic phase. Operators that are Hermitian
/// up to a global phase (|Tr(op^2)| = 1 after normalization) are rotated to the
/// Hermitian representative and signed by their dominant entry; all others get
/// their dominant entry real and positive.
void normalize_operator(ComplexMatrix& op);

/// Hermitian basis for a dagger-closed operator subspace given as orthonormal
/// column-stacked vectors. Builds (M + M^dag)/2 and -i(M - M^dag)/2 for every
/// basis element, Gram-Schmidts them in the Hilbert-Schmidt product dropping
/// anything below tol_rank, and checks the span is unchanged. Throws
/// NumericalError when the subspace is not dagger-closed.
std::vector<ComplexMatrix> hermitian_basis(std::span<const ComplexVector> null_vectors,
                                           double tol_rank = kDefaultTolRank);

// ||P_A - P_B||_F between the orthogonal projectors onto span(A), span(B) in
// operator space (Hilbert-Schmidt geometry).
double operator_subspace_distance(std::span<const ComplexMatrix> a, std::span<const ComplexMatrix> b);

// |<vec a, vec b>| / (||a|| ||b||); 1 means equal up to scale and phase.
double alignment(const ComplexMatrix& a, const ComplexMatrix& b);

enum class PhaseTest { ImaginaryParts, Moduli };

/// Phase of a spectrum. ExceptionalPoint when two eigenvalues coincide within
/// tol*scale and the eigenvector matrix has condition number above 1/tol;
/// otherwise Symmetric when every |Im| (ImaginaryParts) or the spread of moduli
/// (Moduli, relative to the largest) is within tol*scale; else Broken.
PtPhase classify_spectrum(const Spectrum& spectrum, double scale, double tol, PhaseTest test);

}  // namespace intertwine
