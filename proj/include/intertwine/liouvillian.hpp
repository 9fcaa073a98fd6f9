#pragma once

#include <optional>
#include <vector>

#include "intertwine/complex_matrix.hpp"
#include "intertwine/numlin.hpp"
#include "intertwine/operators.hpp"

namespace intertwine {

struct AnalysisTolerances {
  double eig = kDefaultTolEig;
  double rank = kDefaultTolRank;
  // |E| <= zero_rate * ||L||_F counts as a zero rate.
  double zero_rate = 1e-8;
};

struct LiouvillianResult {
  ComplexMatrix liouvillian;
  std::vector<EigenOperator> conserved;  // rate 0, Hermitian
  std::vector<EigenOperator> transient;  // |rate| ascending, then arg(rate)
  Spectrum hamiltonian_spectrum;
};

/// L = -i (H^T (x) 1 - 1 (x) H^dag), so that L vec(eta) = vec(-i(eta H - H^dag eta)).
ComplexMatrix build_liouvillian(const ComplexMatrix& h);

/// All N^2 values -i(eps_p - conj(eps_q)), sorted by real part then imaginary part.
ComplexVector predicted_rates(const ComplexMatrix& h, double tol_eig = kDefaultTolEig);

/// Hermitian basis of the zero modes of L, found through the SVD null space
/// (stable at exceptional points where L is defective).
std::vector<EigenOperator> conserved_operators(const ComplexMatrix& h,
                                               double tol_rank = kDefaultTolRank);

/// Full N^2 decomposition: zero modes from the null space, the remaining
/// N^2 - k eigenpairs of L (smallest k rates removed) as transient operators.
LiouvillianResult eigen_operators(const ComplexMatrix& h, const AnalysisTolerances& tol = {});

// ||eta H - H^dag eta||_F
double verify_intertwining(const ComplexMatrix& eta, const ComplexMatrix& h);

// ||-i(op H - H^dag op) - rate op||_F
double liouvillian_residual(const ComplexMatrix& op, const ComplexMatrix& h, Complex rate);

/// eta_{k+1} = eta_k H / scale for k = 1..count; scale defaults to ||H||_2.
/// Throws InvalidInput if eta1 is not an intertwiner, NumericalError if an
/// output drifts off the intertwining relation.
std::vector<ComplexMatrix> recursive_tower(const ComplexMatrix& eta1, const ComplexMatrix& h,
                                           int count, std::optional<double> scale = std::nullopt);

PtPhase classify_pt_phase(const ComplexMatrix& h, double tol = kDefaultPhaseTol);

/// ||P conj(H) P^-1 - H||_F. P must be an involution.
double verify_pt_symmetry(const ComplexMatrix& h, const ComplexMatrix& parity);

}  // namespace intertwine
