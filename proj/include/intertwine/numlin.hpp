#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "intertwine/complex_matrix.hpp"

namespace intertwine {

inline constexpr double kDefaultTolEig = 1e-9;
inline constexpr double kDefaultTolRank = 1e-9;

// --- products (OpenMP-parallel; serial twins live in reference.hpp) ---------

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x);

// --- elementwise / structural ------------------------------------------------

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);

// Tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
// conj(x) . y
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
double norm2(std::span<const Complex> x);
double frobenius_norm(const ComplexMatrix& a);
double one_norm(const ComplexMatrix& a);

// Rotate v so that its largest-magnitude entry is real and non-negative. Ties
// (within 1e-12 relative) resolve to the lowest index.
void fix_phase(std::span<Complex> v);
std::size_t dominant_index(std::span<const Complex> v);

// --- dense solves ------------------------------------------------------------

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);
Complex determinant(const ComplexMatrix& a);

// --- matrix exponential ------------------------------------------------------

/// e^A by scaling and squaring with a diagonal Pade approximant (degree 3..13
/// chosen from the 1-norm). Never diagonalizes, so defective inputs (exceptional
/// points) are handled like any other. Throws NumericalError on overflow.
ComplexMatrix matexp(const ComplexMatrix& a);

// --- eigendecomposition ------------------------------------------------------

/// Right eigendecomposition of a general complex matrix.
///
/// Columns of `eigenvectors` have unit 2-norm and are phase-fixed (largest entry
/// real, non-negative). `residuals[k] = ||A v_k - eps_k v_k||_2`. Eigenvalues
/// appear in the order they land on the diagonal of the Schur form.
struct Spectrum {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;
  std::vector<double> residuals;
};

/// Hessenberg reduction followed by single-shift complex QR to Schur form, then
/// triangular back-substitution for the eigenvectors. Throws NumericalError if
/// the QR sweep does not converge (naming the unconverged eigenvalue indices) or
/// if any residual exceeds tol_eig * ||A||_F.
Spectrum eig(const ComplexMatrix& a, double tol_eig = kDefaultTolEig);

// --- singular values ---------------------------------------------------------

struct Svd {
  ComplexMatrix u;                      // m x n
  std::vector<double> singular_values;  // descending
  ComplexMatrix v;                      // n x n, A = U diag(s) V^dagger
};

// One-sided (Hestenes) Jacobi. Requires rows >= cols.
Svd svd(const ComplexMatrix& a);

// Orthonormal basis of {x : ||A x|| <= tol_rank * sigma_max}; a zero matrix has
// a full null space.
std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol_rank = kDefaultTolRank);
std::size_t rank(const ComplexMatrix& a, double tol_rank = kDefaultTolRank);
double spectral_norm(const ComplexMatrix& a);
// sigma_max / sigma_min; +inf once sigma_min is within n*eps of sigma_max.
double condition_number(const ComplexMatrix& a);

// Gram-Schmidt (twice) in the Euclidean inner product; vectors whose residual
// norm drops below drop_tol * max(1, original norm) are discarded.
std::vector<ComplexVector> orthonormalize(std::span<const ComplexVector> vectors,
                                          double drop_tol = 1e-10);

}  // namespace intertwine
