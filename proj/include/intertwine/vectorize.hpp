#pragma once

#include <cstddef>
#include <span>

#include "intertwine/complex_matrix.hpp"

namespace intertwine {

// Column-stacked N x N operator: entry (p, q) (0-based) lives at p + q*N.
struct VectorizedOperator {
  ComplexVector data;
  std::size_t dim = 0;
};

VectorizedOperator vec(const ComplexMatrix& m);
ComplexMatrix unvec(const VectorizedOperator& v);
// Length must be a perfect square.
ComplexMatrix unvec(std::span<const Complex> data);

// Dense Kronecker product, OpenMP over output rows.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// B^T (x) A: the matrix of eta -> A eta B acting on vec(eta).
ComplexMatrix sandwich_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace intertwine
