#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(Complex z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Rotation G = [[c, s], [-conj(s), c]] with G [p; q] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s{0.0, 0.0};
  Complex r{0.0, 0.0};
};

Givens make_givens(Complex p, Complex q) {
  if (q == Complex{0.0, 0.0}) return {1.0, {0.0, 0.0}, p};
  if (p == Complex{0.0, 0.0}) return {0.0, {1.0, 0.0}, q};
  const double ap = std::abs(p);
  const double rho = std::hypot(ap, std::abs(q));
  const Complex phase = p / ap;
  return {ap / rho, phase * std::conj(q) / rho, phase * rho};
}

// Rows i, i+1 of m, columns [col_begin, cols).
void rotate_rows(ComplexMatrix& m, std::size_t i, const Givens& g, std::size_t col_begin) {
  for (std::size_t j = col_begin; j < m.cols(); ++j) {
    const Complex a = m(i, j), b = m(i + 1, j);
    m(i, j) = g.c * a + g.s * b;
    m(i + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

// Columns i, i+1 of m times G^dagger, rows [0, row_end].
void rotate_cols(ComplexMatrix& m, std::size_t i, const Givens& g, std::size_t row_end) {
  for (std::size_t r = 0; r <= row_end && r < m.rows(); ++r) {
    const Complex a = m(r, i), b = m(r, i + 1);
    m(r, i) = a * g.c + b * std::conj(g.s);
    m(r, i + 1) = -a * g.s + b * g.c;
  }
}

void reduce_to_hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  ComplexVector v;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    v.assign(len, {});
    for (std::size_t i = 0; i < len; ++i) v[i] = h(k + 1 + i, k);
    const double alpha = norm2(v);
    if (alpha == 0.0) continue;
    const Complex phase = std::abs(v[0]) == 0.0 ? Complex{1.0, 0.0} : v[0] / std::abs(v[0]);
    v[0] += phase * alpha;
    double vn2 = 0.0;
    for (const auto& z : v) vn2 += std::norm(z);
    if (vn2 == 0.0) continue;
    const double beta = 2.0 / vn2;
    for (std::size_t j = k; j < n; ++j) {
      Complex s{0.0, 0.0};
      for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= beta;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= s * v[i];
    }
    for (ComplexMatrix* m : {&h, &q}) {
      for (std::size_t r = 0; r < n; ++r) {
        Complex s{0.0, 0.0};
        for (std::size_t i = 0; i < len; ++i) s += (*m)(r, k + 1 + i) * v[i];
        s *= beta;
        for (std::size_t i = 0; i < len; ++i) (*m)(r, k + 1 + i) -= s * std::conj(v[i]);
      }
    }
    h(k + 1, k) = -phase * alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

Complex wilkinson_shift(const ComplexMatrix& t, std::size_t iu, int iter) {
  if (iter == 10 || iter == 30) {
    // Exceptional shift to break cycles.
    double s = std::abs(t(iu, iu - 1).real());
    if (iu >= 2) s += std::abs(t(iu - 1, iu - 2).real());
    return {s, 0.0};
  }
  Complex a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
  const double scale = abs1(a) + abs1(b) + abs1(c) + abs1(d);
  if (scale == 0.0) return {0.0, 0.0};
  a /= scale, b /= scale, c /= scale, d /= scale;
  const Complex bc = b * c;
  const Complex diff = a - d;
  const Complex disc = std::sqrt(diff * diff + 4.0 * bc);
  const Complex det = a * d - bc;
  const Complex trace = a + d;
  Complex e1 = (trace + disc) / 2.0;
  Complex e2 = (trace - disc) / 2.0;
  // Recover the smaller root from the product to avoid cancellation.
  if (abs1(e1) > abs1(e2)) {
    e2 = det / e1;
  } else if (abs1(e2) != 0.0) {
    e1 = det / e2;
  }
  return scale * (abs1(e1 - d) < abs1(e2 - d) ? e1 : e2);
}

bool negligible_subdiagonal(const ComplexMatrix& t, std::size_t i, double matrix_scale) {
  double diag = abs1(t(i, i)) + abs1(t(i + 1, i + 1));
  if (diag == 0.0) diag = matrix_scale;
  return abs1(t(i + 1, i)) <= kEps * diag;
}

// Drives the Hessenberg matrix t to upper-triangular Schur form, accumulating the
// unitary similarity into q. Returns the active window size if it stalls.
std::size_t schur_qr(ComplexMatrix& t, ComplexMatrix& q) {
  const std::size_t n = t.rows();
  if (n < 2) return 0;
  const double matrix_scale = std::max(frobenius_norm(t), std::numeric_limits<double>::min());
  const int max_iters = 30 * static_cast<int>(n);
  std::size_t iu = n - 1;
  int iter = 0, total = 0;
  while (true) {
    while (iu > 0 && negligible_subdiagonal(t, iu - 1, matrix_scale)) {
      t(iu, iu - 1) = 0.0;
      --iu;
      iter = 0;
    }
    if (iu == 0) return 0;
    ++iter;
    if (++total > max_iters) return iu + 1;

    std::size_t il = iu - 1;
    while (il > 0 && !negligible_subdiagonal(t, il - 1, matrix_scale)) --il;

    const Complex shift = wilkinson_shift(t, iu, iter);
    Givens g = make_givens(t(il, il) - shift, t(il + 1, il));
    rotate_rows(t, il, g, il);
    rotate_cols(t, il, g, std::min(il + 2, iu));
    rotate_cols(q, il, g, n - 1);

    for (std::size_t i = il + 1; i < iu; ++i) {
      g = make_givens(t(i, i - 1), t(i + 1, i - 1));
      t(i, i - 1) = g.r;
      t(i + 1, i - 1) = 0.0;
      rotate_rows(t, i, g, i);
      rotate_cols(t, i, g, std::min(i + 2, iu));
      rotate_cols(q, i, g, n - 1);
    }
  }
}

// Eigenvectors of the upper-triangular t (columns), by back-substitution.
// Near-equal diagonal entries are separated by a floor so defective blocks still
// give finite vectors with small residuals.
ComplexMatrix triangular_eigenvectors(const ComplexMatrix& t) {
  const std::size_t n = t.rows();
  const double small = std::max(kEps * frobenius_norm(t), std::numeric_limits<double>::min() * 1e10);
  ComplexMatrix x(n, n);
  ComplexVector col(n);
  for (std::size_t k = n; k-- > 0;) {
    std::fill(col.begin(), col.end(), Complex{0.0, 0.0});
    col[k] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      Complex s{0.0, 0.0};
      for (std::size_t j = i + 1; j <= k; ++j) s += t(i, j) * col[j];
      Complex d = t(i, i) - t(k, k);
      if (std::abs(d) < small) d = small;
      col[i] = -s / d;
      const double mag = std::abs(col[i]);
      if (mag > 1e150) {
        for (std::size_t j = i; j <= k; ++j) col[j] /= mag;
      }
    }
    x.set_column(k, col);
  }
  return x;
}

}  // namespace

Spectrum eig(const ComplexMatrix& a, double tol_eig) {
  if (!a.is_square()) throw DimensionError("eig: matrix must be square");
  if (!(tol_eig > 0.0)) throw InvalidInput("eig: tol_eig must be positive");
  const std::size_t n = a.rows();
  ComplexMatrix t = a;
  ComplexMatrix q = ComplexMatrix::identity(n);
  reduce_to_hessenberg(t, q);
  if (const std::size_t stuck = schur_qr(t, q); stuck != 0) {
    std::string which;
    for (std::size_t k = 0; k < stuck; ++k) which += (k ? "," : "") + std::to_string(k);
    throw NumericalError("eig: QR iteration did not converge; unconverged eigenvalues " + which);
  }

  Spectrum out;
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = t(k, k);

  const ComplexMatrix x = triangular_eigenvectors(t);
  out.eigenvectors = ComplexMatrix(n, n);
  out.residuals.resize(n);
  const double anorm = frobenius_norm(a);
  ComplexVector v(n);
  for (std::size_t k = 0; k < n; ++k) {
    // v = Q x_k; x_k is zero below row k.
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc{0.0, 0.0};
      for (std::size_t j = 0; j <= k; ++j) acc += q(i, j) * x(j, k);
      v[i] = acc;
    }
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
    fix_phase(v);
    out.eigenvectors.set_column(k, v);

    ComplexVector av = matvec(a, v);
    for (std::size_t i = 0; i < n; ++i) av[i] -= out.eigenvalues[k] * v[i];
    out.residuals[k] = norm2(av);
    if (!(out.residuals[k] <= tol_eig * anorm) && anorm > 0.0) {
      throw NumericalError("eig: residual " + std::to_string(out.residuals[k]) +
                           " for eigenvalue " + std::to_string(k) + " exceeds tol_eig*||A||_F");
    }
  }
  return out;
}

}  // namespace intertwine
