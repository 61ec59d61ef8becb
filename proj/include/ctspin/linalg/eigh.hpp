#pragma once

#include <vector>

#include "ctspin/linalg/matrix.hpp"

namespace ctspin::linalg {

struct EighResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector for values[j]
};

// Hermitian eigendecomposition with a deterministic phase convention: each
// eigenvector is rotated so its largest-magnitude component (lowest index on
// ties) is real and positive.  Throws std::invalid_argument if the input
// deviates from Hermitian by more than herm_tol (absolute, per entry).
EighResult eigh(const Matrix& h, double herm_tol = 1e-9);

// exp(-i 2 pi H tau) for Hermitian H (GHz) over tau (ns), built from the
// spectral decomposition: exactly unitary and exactly composable,
// U(t1) U(t2) = U(t1 + t2), to rounding.
Matrix evolution_operator(const Matrix& h, double tau_ns, double herm_tol = 1e-9);

}  // namespace ctspin::linalg
