#pragma once

#include "ctspin/linalg/matrix.hpp"

namespace ctspin::linalg {

// Matrix exponential by Pade(13) with scaling and squaring.  Works for any
// square complex matrix; accuracy near machine precision for well-scaled
// inputs.
Matrix expm(const Matrix& a);

}  // namespace ctspin::linalg
