#pragma once

#include "ctspin/linalg/matrix.hpp"
#include "ctspin/spin/angular.hpp"

namespace ctspin::spin {

// Extended Stevens operator O_k^q for ranks k in {2, 4, 6} and -k <= q <= k,
// in the operator-equivalent convention
//   O_k^0     = f_k0(Jz)
//   O_k^q     = (f_k|q|(Jz) A_q + A_q f_k|q|(Jz)) / 2
//   A_q (q>0) = (J+^q + J-^q) / 2
//   A_q (q<0) = (J+^|q| - J-^|q|) / (2 i)
// with f the standard rank-k polynomial prefactors in Jz and X = j(j+1).
// Hermitian for all supported (k, q).  Throws std::invalid_argument for
// unsupported rank/order combinations.
linalg::Matrix stevens_operator(int k, int q, const AngularMomentumSpec& spec);

}  // namespace ctspin::spin
