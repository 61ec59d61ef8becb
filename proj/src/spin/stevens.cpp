#include "ctspin/spin/stevens.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ctspin::spin {

namespace {

// Polynomial prefactor f_k|q|(m) with X = j(j+1), standard extended Stevens
// tables.
double f_poly(int k, int aq, double m, double X) {
  const double m2 = m * m;
  switch (k) {
    case 2:
      switch (aq) {
        case 0: return 3.0 * m2 - X;
        case 1: return m;
        case 2: return 1.0;
      }
      break;
    case 4:
      switch (aq) {
        case 0: return 35.0 * m2 * m2 - (30.0 * X - 25.0) * m2 + 3.0 * X * X - 6.0 * X;
        case 1: return 7.0 * m2 * m - (3.0 * X + 1.0) * m;
        case 2: return 7.0 * m2 - X - 5.0;
        case 3: return m;
        case 4: return 1.0;
      }
      break;
    case 6:
      switch (aq) {
        case 0:
          return 231.0 * m2 * m2 * m2 - (315.0 * X - 735.0) * m2 * m2 +
                 (105.0 * X * X - 525.0 * X + 294.0) * m2 - 5.0 * X * X * X + 40.0 * X * X -
                 60.0 * X;
        case 1: return 33.0 * m2 * m2 * m - (30.0 * X - 15.0) * m2 * m + (5.0 * X * X - 10.0 * X + 12.0) * m;
        case 2: return 33.0 * m2 * m2 - (18.0 * X + 123.0) * m2 + X * X + 10.0 * X + 102.0;
        case 3: return 11.0 * m2 * m - (3.0 * X + 59.0) * m;
        case 4: return 11.0 * m2 - X - 38.0;
        case 5: return m;
        case 6: return 1.0;
      }
      break;
  }
  throw std::invalid_argument("stevens_operator: unsupported (k, q) = (" + std::to_string(k) + ", " +
                              std::to_string(aq) + ")");
}

}  // namespace

linalg::Matrix stevens_operator(int k, int q, const AngularMomentumSpec& spec) {
  if (k != 2 && k != 4 && k != 6)
    throw std::invalid_argument("stevens_operator: rank k must be 2, 4 or 6 (got " + std::to_string(k) + ")");
  const int aq = std::abs(q);
  if (aq > k)
    throw std::invalid_argument("stevens_operator: |q| must not exceed k (got q=" + std::to_string(q) + ")");

  const int d = spec.dim();
  const double X = spec.j * (spec.j + 1.0);
  (void)f_poly(k, aq, 0.0, X);  // validates (k, q) eagerly

  linalg::Matrix f(d, d);
  for (int i = 0; i < d; ++i) f(i, i) = f_poly(k, aq, spec.m_of_index(i), X);
  if (q == 0) return f;

  const auto ops = angular_momentum_ops(spec);
  linalg::Matrix jp_pow = linalg::Matrix::identity(d);
  linalg::Matrix jm_pow = linalg::Matrix::identity(d);
  for (int p = 0; p < aq; ++p) {
    jp_pow = linalg::matmul(jp_pow, ops.jplus);
    jm_pow = linalg::matmul(jm_pow, ops.jminus);
  }
  linalg::Matrix a(d, d);
  if (q > 0)
    a = (jp_pow + jm_pow) * 0.5;
  else
    a = (jp_pow - jm_pow) * std::complex<double>(0.0, -0.5);

  return (linalg::matmul(f, a) + linalg::matmul(a, f)) * 0.5;
}

}  // namespace ctspin::spin
