#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

Svd svd(const ComplexMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw DimensionError("svd: one-sided Jacobi needs rows >= cols");

  // Work on columns: cols[j] is column j of A V.
  std::vector<ComplexVector> cols(n), vcols(n, ComplexVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    cols[j] = a.column(j);
    vcols[j][j] = 1.0;
  }

  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 100;
  // Columns this short are rounding noise from a rank-deficient input; their
  // mutual orthogonality cannot improve and does not matter.
  double frob2 = 0.0;
  for (const auto& c : cols) {
    for (const auto& z : c) frob2 += std::norm(z);
  }
  const double noise = static_cast<double>(m) * std::numeric_limits<double>::epsilon();
  const double noise2 = noise * noise * frob2;
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        for (const auto& z : cols[p]) alpha += std::norm(z);
        for (const auto& z : cols[q]) beta += std::norm(z);
        const Complex gamma = dot(cols[p], cols[q]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kTol * std::sqrt(alpha * beta) || std::min(alpha, beta) <= noise2) continue;
        converged = false;

        // Diagonalize [[alpha, gamma], [conj(gamma), beta]]: phase-align column q,
        // then apply the real symmetric Jacobi rotation.
        const Complex phase = std::conj(gamma) / g;  // e^{-i arg gamma}
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (auto* pair : {&cols, &vcols}) {
          auto& up = (*pair)[p];
          auto& uq = (*pair)[q];
          for (std::size_t i = 0; i < up.size(); ++i) {
            const Complex x = up[i];
            const Complex y = uq[i] * phase;
            up[i] = c * x - s * y;
            uq[i] = s * x + c * y;
          }
        }
      }
    }
  }
  if (!converged) throw NumericalError("svd: Jacobi sweeps did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(cols[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Svd out{ComplexMatrix(m, n), std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    out.v.set_column(k, vcols[j]);
    if (sigma[j] > 0.0) {
      ComplexVector u = cols[j];
      for (auto& z : u) z /= sigma[j];
      out.u.set_column(k, u);
    }
  }
  return out;
}

}  // namespace intertwine
