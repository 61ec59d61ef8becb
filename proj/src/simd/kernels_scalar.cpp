#include "ctspin/simd/kernels.hpp"

#include <atomic>

namespace ctspin::simd {

namespace {

void gemm_acc_scalar(const cplx* a, const cplx* b, cplx* c, int m, int k, int n) {
  // i-k-j loop order keeps the inner loop contiguous over both B and C rows.
  for (int i = 0; i < m; ++i) {
    const cplx* arow = a + static_cast<std::size_t>(i) * k;
    cplx* crow = c + static_cast<std::size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const cplx aip = arow[p];
      if (aip == cplx{0.0, 0.0}) continue;
      const cplx* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(cplx alpha, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

cplx dotc_scalar(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx t = std::conj(x[i]) * y[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double nrm2sq_scalar(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

constexpr Kernels kScalar{gemm_acc_scalar, axpy_scalar, scal_scalar,
                          dotc_scalar, nrm2sq_scalar, "scalar"};

std::atomic<Backend> g_backend{Backend::kAuto};

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

#if !defined(CTSPIN_HAVE_AVX2)
const Kernels& simd_kernels() { return kScalar; }
bool simd_available() { return false; }
#endif

const Kernels& active() {
  switch (g_backend.load(std::memory_order_relaxed)) {
    case Backend::kScalar:
      return scalar_kernels();
    case Backend::kSimd:
      return simd_kernels();
    case Backend::kAuto:
    default:
      return simd_available() ? simd_kernels() : scalar_kernels();
  }
}

void select_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }

}  // namespace ctspin::simd
