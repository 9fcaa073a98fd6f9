#pragma once

// Serial reference kernels. The library uses the OpenMP versions; these stay
// for tests (bit-identical comparisons) and for the benchmark.

#include "intertwine/complex_matrix.hpp"

namespace intertwine::reference {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace intertwine::reference
