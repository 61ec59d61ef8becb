#include "ctspin/linalg/expm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctspin::linalg {

namespace {

// Pade(13) coefficients (Higham 2005).
constexpr double b13[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
constexpr double theta13 = 5.371920351148152;

}  // namespace

Matrix expm(const Matrix& a) {
  if (!a.is_square()) throw std::invalid_argument("expm: matrix must be square");
  const int n = a.rows();
  if (n == 0) return a;

  const double nrm = a.norm_one();
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  Matrix as = a;
  if (s > 0) as *= std::ldexp(1.0, -s);

  const Matrix i = Matrix::identity(n);
  const Matrix a2 = matmul(as, as);
  const Matrix a4 = matmul(a2, a2);
  const Matrix a6 = matmul(a2, a4);

  // U = A * (A6*(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
  Matrix w1 = a6 * b13[13] + a4 * b13[11] + a2 * b13[9];
  Matrix w2 = a6 * b13[7] + a4 * b13[5] + a2 * b13[3] + i * b13[1];
  Matrix u = matmul(as, matmul(a6, w1) + w2);
  // V = A6*(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
  Matrix z1 = a6 * b13[12] + a4 * b13[10] + a2 * b13[8];
  Matrix v = matmul(a6, z1) + a6 * b13[6] + a4 * b13[4] + a2 * b13[2] + i * b13[0];

  Matrix p = v + u;   // numerator
  Matrix q = v - u;   // denominator
  using EMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<EMat> qm(q.data(), n, n);
  Eigen::Map<EMat> pm(p.data(), n, n);
  EMat x = qm.partialPivLu().solve(pm);

  Matrix r(n, n);
  for (int ii = 0; ii < n; ++ii)
    for (int jj = 0; jj < n; ++jj) r(ii, jj) = x(ii, jj);
  for (int k = 0; k < s; ++k) r = matmul(r, r);
  return r;
}

}  // namespace ctspin::linalg
