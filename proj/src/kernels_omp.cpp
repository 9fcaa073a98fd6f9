#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

}  // namespace

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  ComplexMatrix c(n, m);
  const bool parallel = n * inner * m >= kParallelWork;
  // i-k-j order: each c(i, j) accumulates over k in ascending order, the same
  // summation order as the serial reference, so results are bit-identical.
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Complex* crow = &c(i, 0);
    for (std::size_t k = 0; k < inner; ++k) {
      const Complex aik = a(i, k);
      const Complex* brow = &b(k, 0);
      for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionError("matvec: length mismatch");
  const std::size_t n = a.rows(), m = a.cols();
  ComplexVector y(n);
  const bool parallel = n * m >= kParallelWork;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace intertwine
