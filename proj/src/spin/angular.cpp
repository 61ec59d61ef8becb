#include "ctspin/spin/angular.hpp"

#include <cmath>
#include <stdexcept>

namespace ctspin::spin {

AngularMomentumOps angular_momentum_ops(const AngularMomentumSpec& spec) {
  const double two_j = 2.0 * spec.j;
  if (spec.j < 0.0 || std::abs(two_j - std::lround(two_j)) > 1e-12)
    throw std::invalid_argument("angular_momentum_ops: 2j must be a non-negative integer");

  const int d = spec.dim();
  const double j = spec.j;
  AngularMomentumOps ops{Matrix(d, d), Matrix(d, d), Matrix(d, d), Matrix(d, d), Matrix(d, d)};

  for (int i = 0; i < d; ++i) ops.jz(i, i) = spec.m_of_index(i);

  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; with descending-m ordering the
  // raised state sits one row above.
  for (int i = 1; i < d; ++i) {
    const double m = spec.m_of_index(i);
    ops.jplus(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  ops.jminus = ops.jplus.adjoint();
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      ops.jx(i, k) = 0.5 * (ops.jplus(i, k) + ops.jminus(i, k));
      ops.jy(i, k) = std::complex<double>(0.0, -0.5) * (ops.jplus(i, k) - ops.jminus(i, k));
    }
  return ops;
}

std::string m_label(const AngularMomentumSpec& spec, int index) {
  const long tm = std::lround(2.0 * spec.m_of_index(index));
  std::string sign = tm >= 0 ? "+" : "-";
  const long a = std::labs(tm);
  if (a % 2 == 0) return sign + std::to_string(a / 2);
  return sign + std::to_string(a) + "/2";
}

}  // namespace ctspin::spin
