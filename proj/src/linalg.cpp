#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& z : out.data()) z = std::conj(z);
  return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  return dot(a.data(), b.data());
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

double norm2(std::span<const Complex> x) {
  // Scaled accumulation so huge/tiny vectors don't overflow/underflow.
  double scale = 0.0;
  for (const auto& z : x) scale = std::max({scale, std::abs(z.real()), std::abs(z.imag())});
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& z : x) sum += std::norm(z / scale);
  return scale * std::sqrt(sum);
}

double frobenius_norm(const ComplexMatrix& a) { return norm2(a.data()); }

double one_norm(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

std::size_t dominant_index(std::span<const Complex> v) {
  double biggest = 0.0;
  for (const auto& z : v) biggest = std::max(biggest, std::abs(z));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) >= (1.0 - 1e-12) * biggest) return k;
  }
  return 0;
}

void fix_phase(std::span<Complex> v) {
  if (v.empty()) return;
  const Complex pivot = v[dominant_index(v)];
  const double mag = std::abs(pivot);
  if (mag == 0.0) return;
  const Complex rotate = std::conj(pivot) / mag;
  for (auto& z : v) z *= rotate;
  v[dominant_index(v)].imag(0.0);
}

namespace {

struct Lu {
  ComplexMatrix factors;
  std::vector<std::size_t> pivots;
  int sign = 1;
  bool singular = false;
};

Lu lu_decompose(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("LU: matrix must be square");
  const std::size_t n = a.rows();
  Lu lu{a, std::vector<std::size_t>(n), 1, false};
  auto& m = lu.factors;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > best) {
        best = std::abs(m(i, k));
        p = i;
      }
    }
    lu.pivots[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      lu.sign = -lu.sign;
    }
    if (best == 0.0) {
      lu.singular = true;
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / m(k, k);
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return lu;
}

}  // namespace

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("solve: right-hand side has wrong row count");
  const Lu lu = lu_decompose(a);
  if (lu.singular) throw NumericalError("solve: matrix is singular");
  const std::size_t n = a.rows();
  ComplexMatrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    if (lu.pivots[k] != k)
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(lu.pivots[k], j));
  }
  const auto& f = lu.factors;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = x(i, j);
      for (std::size_t k = 0; k < i; ++k) acc -= f(i, k) * x(k, j);
      x(i, j) = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
      Complex acc = x(ii, j);
      for (std::size_t k = ii + 1; k < n; ++k) acc -= f(ii, k) * x(k, j);
      x(ii, j) = acc / f(ii, ii);
    }
  }
  if (!x.all_finite()) throw NumericalError("solve: result overflowed");
  return x;
}

ComplexMatrix inverse(const ComplexMatrix& a) { return solve(a, ComplexMatrix::identity(a.rows())); }

Complex determinant(const ComplexMatrix& a) {
  const Lu lu = lu_decompose(a);
  if (lu.singular) return {0.0, 0.0};
  Complex det{static_cast<double>(lu.sign), 0.0};
  for (std::size_t k = 0; k < a.rows(); ++k) det *= lu.factors(k, k);
  return det;
}

std::vector<ComplexVector> null_space(const ComplexMatrix& a, double tol_rank) {
  if (!(tol_rank > 0.0)) throw InvalidInput("null_space: tol_rank must be positive");
  const Svd s = svd(a);
  const double sigma_max = s.singular_values.empty() ? 0.0 : s.singular_values.front();
  std::vector<ComplexVector> basis;
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    if (s.singular_values[k] <= tol_rank * sigma_max) basis.push_back(s.v.column(k));
  }
  for (auto& v : basis) fix_phase(v);
  return basis;
}

std::size_t rank(const ComplexMatrix& a, double tol_rank) {
  if (!(tol_rank > 0.0)) throw InvalidInput("rank: tol_rank must be positive");
  const Svd s = svd(a);
  if (s.singular_values.empty() || s.singular_values.front() == 0.0) return 0;
  const double cut = tol_rank * s.singular_values.front();
  return static_cast<std::size_t>(std::count_if(s.singular_values.begin(), s.singular_values.end(),
                                                [cut](double sv) { return sv > cut; }));
}

double spectral_norm(const ComplexMatrix& a) {
  const Svd s = svd(a);
  return s.singular_values.empty() ? 0.0 : s.singular_values.front();
}

double condition_number(const ComplexMatrix& a) {
  const Svd s = svd(a);
  if (s.singular_values.empty()) return 0.0;
  const double smallest = s.singular_values.back();
  const double floor = static_cast<double>(a.cols()) * std::numeric_limits<double>::epsilon();
  if (smallest <= floor * s.singular_values.front()) return std::numeric_limits<double>::infinity();
  return s.singular_values.front() / smallest;
}

std::vector<ComplexVector> orthonormalize(std::span<const ComplexVector> vectors, double drop_tol) {
  std::vector<ComplexVector> basis;
  for (const auto& original : vectors) {
    ComplexVector v = original;
    const double start = norm2(v);
    if (start == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const Complex c = dot(q, v);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * q[k];
      }
    }
    const double left = norm2(v);
    if (left <= drop_tol * std::max(1.0, start)) continue;
    for (auto& z : v) z /= left;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace intertwine
