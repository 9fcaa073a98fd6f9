#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

#include "intertwine/assignment.hpp"
#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"
#include "intertwine/reference.hpp"
#include "test_support.hpp"

using namespace intertwine;
using itest::Rng;

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  }
  return m;
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix a(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  }
  return a;
}

}  // namespace

TEST_CASE("matmul agrees with the serial reference bit for bit") {
  Rng rng(1);
  for (auto [n, k, m] : {std::tuple{1, 1, 1}, {3, 5, 2}, {17, 9, 13}, {48, 40, 44}, {64, 64, 64}}) {
    const auto a = itest::random_matrix(rng, n, k), b = itest::random_matrix(rng, k, m);
    CHECK(matmul(a, b) == reference::matmul(a, b));
  }
  const auto a = itest::random_square(rng, 70);
  const auto x = itest::random_state(rng, 70);
  CHECK(matvec(a, x) == reference::matvec(a, x));
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(matexp(ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(eig(ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(svd(ComplexMatrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex{std::nan(""), 0.0}}), InvalidInput);
}

TEST_CASE("eig matches Eigen on random matrices") {
  Rng rng(2);
  for (std::size_t n = 1; n <= 14; ++n) {
    const auto a = itest::random_square(rng, n);
    const Spectrum s = eig(a);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(a));
    ComplexVector ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
    CHECK(matched_distance(s.eigenvalues, ref) <= 1e-10 * frobenius_norm(a));
    for (std::size_t k = 0; k < n; ++k) {
      const auto v = s.eigenvectors.column(k);
      CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s.residuals[k] <= 1e-11 * frobenius_norm(a));
    }
  }
}

TEST_CASE("eig on structured inputs") {
  SUBCASE("diagonal") {
    const ComplexVector d{3.0, Complex{0, 1}, -2.0};
    const Spectrum s = eig(ComplexMatrix::diagonal(d));
    CHECK(matched_distance(s.eigenvalues, d) == 0.0);
  }
  SUBCASE("defective Jordan block") {
    const ComplexMatrix j{{2.0, 1.0}, {0.0, 2.0}};
    const Spectrum s = eig(j);
    CHECK(std::abs(s.eigenvalues[0] - 2.0) < 1e-12);
    CHECK(std::abs(s.eigenvalues[1] - 2.0) < 1e-12);
  }
  SUBCASE("Hermitian gives real spectrum") {
    Rng rng(3);
    const auto a = itest::random_square(rng, 6);
    const Spectrum s = eig(a + adjoint(a));
    for (const auto& e : s.eigenvalues) CHECK(std::abs(e.imag()) < 1e-12);
  }
  SUBCASE("zero matrix") {
    const Spectrum s = eig(ComplexMatrix(3, 3));
    for (const auto& e : s.eigenvalues) CHECK(e == Complex{0.0, 0.0});
  }
}

TEST_CASE("svd matches Eigen and reconstructs") {
  Rng rng(4);
  for (auto [m, n] : {std::pair{1, 1}, {4, 4}, {7, 3}, {16, 16}}) {
    const auto a = itest::random_matrix(rng, m, n);
    const Svd s = svd(a);
    Eigen::JacobiSVD<Eigen::MatrixXcd> es(to_eigen(a));
    for (int k = 0; k < n; ++k) CHECK(std::abs(s.singular_values[k] - es.singularValues()(k)) < 1e-12 * es.singularValues()(0));
    CHECK(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
    ComplexMatrix us = s.u;
    for (std::size_t i = 0; i < us.rows(); ++i) {
      for (int k = 0; k < n; ++k) us(i, k) *= s.singular_values[k];
    }
    CHECK(frobenius_norm(matmul(us, adjoint(s.v)) - a) < 1e-12 * frobenius_norm(a));
    CHECK(frobenius_norm(matmul(adjoint(s.v), s.v) - ComplexMatrix::identity(n)) < 1e-12);
  }
}

TEST_CASE("null space, rank and conditioning") {
  Rng rng(5);
  const auto b = itest::random_matrix(rng, 6, 3), c = itest::random_matrix(rng, 3, 6);
  const auto a = matmul(b, c);  // rank 3
  CHECK(rank(a) == 3);
  const auto ns = null_space(a);
  CHECK(ns.size() == 3);
  for (const auto& v : ns) CHECK(norm2(matvec(a, v)) < 1e-12 * frobenius_norm(a));
  CHECK(null_space(ComplexMatrix(3, 3)).size() == 3);
  CHECK(rank(ComplexMatrix::identity(4)) == 4);
  CHECK(std::isinf(condition_number(a)));
  CHECK(condition_number(ComplexMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(spectral_norm(ComplexMatrix::diagonal(ComplexVector{1.0, -5.0, 2.0})) == doctest::Approx(5.0));
}

TEST_CASE("solve, inverse and determinant against Eigen") {
  Rng rng(6);
  const auto a = itest::random_square(rng, 8), b = itest::random_matrix(rng, 8, 3);
  CHECK(itest::max_abs_diff(solve(a, b), from_eigen(to_eigen(a).partialPivLu().solve(to_eigen(b)))) < 1e-11);
  CHECK(frobenius_norm(matmul(a, inverse(a)) - ComplexMatrix::identity(8)) < 1e-11);
  CHECK(std::abs(determinant(a) - to_eigen(a).determinant()) < 1e-10 * std::abs(determinant(a)));
  CHECK_THROWS_AS(inverse(ComplexMatrix(2, 2)), NumericalError);
}

TEST_CASE("matexp against Eigen, Taylor and closed forms") {
  Rng rng(7);
  for (double scale : {1e-3, 0.3, 1.0, 4.0, 30.0}) {
    auto a = itest::random_square(rng, 5);
    a *= Complex{scale / one_norm(a), 0.0};
    const ComplexMatrix ref = from_eigen(to_eigen(a).exp());
    CHECK(frobenius_norm(matexp(a) - ref) <= 1e-12 * std::max(1.0, frobenius_norm(ref)) * (1 + scale));
  }
  SUBCASE("Taylor for small norm") {
    auto a = itest::random_square(rng, 4);
    a *= Complex{0.9 / one_norm(a), 0.0};
    ComplexMatrix term = ComplexMatrix::identity(4), sum = term;
    for (int k = 1; k < 30; ++k) {
      term = matmul(term, a);
      term *= Complex{1.0 / k, 0.0};
      sum += term;
    }
    CHECK(frobenius_norm(matexp(a) - sum) < 1e-14);
  }
  SUBCASE("nilpotent input terminates") {
    const ComplexMatrix n{{0.0, 3.0}, {0.0, 0.0}};
    CHECK(itest::max_abs_diff(matexp(n), ComplexMatrix{{1.0, 3.0}, {0.0, 1.0}}) < 1e-15);
  }
  SUBCASE("diagonal") {
    const ComplexMatrix d = ComplexMatrix::diagonal(ComplexVector{Complex{0, M_PI}, 2.0});
    const ComplexMatrix e = matexp(d);
    CHECK(std::abs(e(0, 0) + 1.0) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(2.0)) < 1e-13);
  }
  SUBCASE("overflow is reported") { CHECK_THROWS_AS(matexp(ComplexMatrix{{1000.0}}), NumericalError); }
}

TEST_CASE("phase fixing and orthonormalization") {
  ComplexVector v{Complex{0, 1}, Complex{0, -1}, 0.5};
  fix_phase(v);
  CHECK(dominant_index(v) == 0);
  CHECK(v[0] == Complex{1.0, 0.0});
  CHECK(std::abs(v[1] + 1.0) < 1e-15);

  Rng rng(8);
  const auto a = itest::random_state(rng, 4), b = itest::random_state(rng, 4);
  ComplexVector c(4);
  for (int i = 0; i < 4; ++i) c[i] = 2.0 * a[i] - b[i];
  const std::vector<ComplexVector> in{a, b, c};
  const auto q = orthonormalize(in);
  REQUIRE(q.size() == 2);
  CHECK(std::abs(dot(q[0], q[1])) < 1e-15);
  CHECK(std::abs(norm2(q[1]) - 1.0) < 1e-15);
}

TEST_CASE("Hungarian assignment") {
  const std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const auto p = optimal_assignment(cost);
  CHECK(cost[0][p[0]] + cost[1][p[1]] + cost[2][p[2]] == 5.0);
  const ComplexVector x{1.0, 2.0, 3.0}, y{3.0 + 1e-3, 1.0, 2.0};
  CHECK(matched_distance(x, y) == doctest::Approx(1e-3));
}
