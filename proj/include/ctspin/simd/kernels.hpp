#pragma once

#include <complex>
#include <cstddef>

// Low-level complex-double kernels behind the dense linear algebra layer.
// Two implementations exist: a portable scalar reference and an AVX2+FMA
// variant compiled in its own translation unit.  The active set is chosen at
// runtime from CPU capabilities; tests compare the two bit-for-bit-free
// (tolerance-based, FMA contracts reorder rounding).

namespace ctspin::simd {

using cplx = std::complex<double>;

struct Kernels {
  // C += A * B, row-major, A is m x k, B is k x n, C is m x n.
  void (*gemm_acc)(const cplx* a, const cplx* b, cplx* c, int m, int k, int n);
  // y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  // x *= alpha
  void (*scal)(cplx alpha, cplx* x, std::size_t n);
  // sum conj(x_i) * y_i
  cplx (*dotc)(const cplx* x, const cplx* y, std::size_t n);
  // sum |x_i|^2
  double (*nrm2sq)(const cplx* x, std::size_t n);
  const char* name;
};

enum class Backend { kAuto, kScalar, kSimd };

const Kernels& scalar_kernels();
// AVX2 set when compiled in and supported by the CPU, else the scalar set.
const Kernels& simd_kernels();
// Currently selected set (kAuto resolves from CPU capabilities).
const Kernels& active();
void select_backend(Backend b);
bool simd_available();

}  // namespace ctspin::simd
