#pragma once

#include <string>
#include <vector>

#include "ctspin/linalg/matrix.hpp"

namespace ctspin::spin {

using linalg::Matrix;

// Angular momentum quantum number j (integer or half-integer).  Basis states
// are |j, m> ordered by descending m: index 0 is m = +j.
struct AngularMomentumSpec {
  double j = 0.5;
  int dim() const { return static_cast<int>(std::lround(2.0 * j)) + 1; }
  double m_of_index(int i) const { return j - i; }
};

struct AngularMomentumOps {
  Matrix jx, jy, jz, jplus, jminus;
};

// Throws std::invalid_argument unless 2j is a non-negative integer.
AngularMomentumOps angular_momentum_ops(const AngularMomentumSpec& spec);

// Label such as "+7/2" or "-4" for basis index i.
std::string m_label(const AngularMomentumSpec& spec, int index);

}  // namespace ctspin::spin
