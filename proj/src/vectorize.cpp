#include "intertwine/vectorize.hpp"

#include <cmath>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

// 1-based (p, q) -> p + (q-1)N becomes 0-based (p, q) -> p + q*N. Getting this
// backwards transposes every superoperator built on top of it.
VectorizedOperator vec(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("vec: operator must be square");
  const std::size_t n = m.rows();
  VectorizedOperator out{ComplexVector(n * n), n};
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) out.data[p + q * n] = m(p, q);
  return out;
}

ComplexMatrix unvec(std::span<const Complex> data) {
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(data.size()))));
  if (n * n != data.size()) {
    throw DimensionError("unvec: length " + std::to_string(data.size()) + " is not a perfect square");
  }
  ComplexMatrix m(n, n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) m(p, q) = data[p + q * n];
  return m;
}

ComplexMatrix unvec(const VectorizedOperator& v) {
  if (v.dim * v.dim != v.data.size()) throw DimensionError("unvec: dim^2 != data length");
  return unvec(std::span<const Complex>(v.data));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t br = b.rows(), bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  const auto out_rows = static_cast<std::ptrdiff_t>(out.rows());
#pragma omp parallel for schedule(static) if (out.size() >= (1u << 14))
  for (std::ptrdiff_t rr = 0; rr < out_rows; ++rr) {
    const auto row = static_cast<std::size_t>(rr);
    const std::size_t i = row / br, k = row % br;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t l = 0; l < bc; ++l) out(row, j * bc + l) = aij * b(k, l);
    }
  }
  return out;
}

ComplexMatrix sandwich_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionError("sandwich_matrix: A and B must be square with equal size");
  }
  return kron(transpose(b), a);
}

}  // namespace intertwine
