#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "intertwine/errors.hpp"
#include "intertwine/numlin.hpp"

namespace intertwine {

namespace {

// Diagonal Pade coefficients and 1-norm thresholds (Higham 2005).
constexpr std::array<double, 4> kB3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                    25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kB9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                     30270240.0,    2162160.0,    110880.0,     3960.0,
                                     90.0,          1.0};
constexpr std::array<double, 14> kB13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                      1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                      670442572800.0,      33522128640.0,       1323241920.0,
                                      40840800.0,          960960.0,            16380.0,
                                      182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

void axpy(ComplexMatrix& acc, double coeff, const ComplexMatrix& x) {
  auto dst = acc.data();
  auto src = x.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += coeff * src[k];
}

ComplexMatrix pade_ratio(const ComplexMatrix& u, const ComplexMatrix& v) {
  return solve(v - u, v + u);
}

// Degrees 3..9: U = A * sum b_{2j+1} A^{2j}, V = sum b_{2j} A^{2j}.
ComplexMatrix pade_low(const ComplexMatrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  const std::size_t degree = b.size() - 1;
  std::vector<ComplexMatrix> even_powers{ComplexMatrix::identity(n)};
  const ComplexMatrix a2 = matmul(a, a);
  while (2 * even_powers.size() <= degree) even_powers.push_back(matmul(even_powers.back(), a2));
  ComplexMatrix odd(n, n), v(n, n);
  for (std::size_t j = 0; j < even_powers.size(); ++j) {
    if (2 * j + 1 <= degree) axpy(odd, b[2 * j + 1], even_powers[j]);
    axpy(v, b[2 * j], even_powers[j]);
  }
  return pade_ratio(matmul(a, odd), v);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const auto& b = kB13;
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = matmul(a, a);
  const ComplexMatrix a4 = matmul(a2, a2);
  const ComplexMatrix a6 = matmul(a4, a2);

  ComplexMatrix inner_u(n, n);
  axpy(inner_u, b[13], a6);
  axpy(inner_u, b[11], a4);
  axpy(inner_u, b[9], a2);
  ComplexMatrix odd = matmul(a6, inner_u);
  axpy(odd, b[7], a6);
  axpy(odd, b[5], a4);
  axpy(odd, b[3], a2);
  axpy(odd, b[1], id);
  const ComplexMatrix u = matmul(a, odd);

  ComplexMatrix inner_v(n, n);
  axpy(inner_v, b[12], a6);
  axpy(inner_v, b[10], a4);
  axpy(inner_v, b[8], a2);
  ComplexMatrix v = matmul(a6, inner_v);
  axpy(v, b[6], a6);
  axpy(v, b[4], a4);
  axpy(v, b[2], a2);
  axpy(v, b[0], id);
  return pade_ratio(u, v);
}

}  // namespace

ComplexMatrix matexp(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("matexp: matrix must be square");
  if (!a.all_finite()) throw NumericalError("matexp: non-finite input");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  const double norm = one_norm(a);
  if (norm <= kTheta3) return pade_low(a, kB3);
  if (norm <= kTheta5) return pade_low(a, kB5);
  if (norm <= kTheta7) return pade_low(a, kB7);
  if (norm <= kTheta9) return pade_low(a, kB9);

  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  ComplexMatrix scaled = a;
  scaled *= std::ldexp(1.0, -squarings);
  ComplexMatrix result = pade13(scaled);
  for (int k = 0; k < squarings; ++k) {
    result = matmul(result, result);
    if (!result.all_finite()) throw NumericalError("matexp: overflow while squaring");
  }
  if (!result.all_finite()) throw NumericalError("matexp: overflow");
  return result;
}

}  // namespace intertwine
