// AVX2+FMA complex-double kernels.  This translation unit is compiled with
// -mavx2 -mfma and must only be entered after a runtime cpuid check; the
// dispatch below falls back to the scalar set on older hardware.

#include "ctspin/simd/kernels.hpp"

#if defined(CTSPIN_HAVE_AVX2)

#include <immintrin.h>

namespace ctspin::simd {

namespace {

// One __m256d holds two complex doubles as [re0 im0 re1 im1].
// Complex product c = a*b with broadcast scalar a = (ar, ai):
//   re = ar*br - ai*bi,  im = ar*bi + ai*br
// computed as fmaddsub(ar, b, ai * swap(b)).
inline __m256d cmul_broadcast(__m256d var, __m256d vai, __m256d vb) {
  __m256d swapped = _mm256_permute_pd(vb, 0x5);
  __m256d t = _mm256_mul_pd(vai, swapped);
  return _mm256_fmaddsub_pd(var, vb, t);
}

void gemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, int m, int k, int n) {
  const double* bd = reinterpret_cast<const double*>(b);
  double* cd = reinterpret_cast<double*>(c);
  const int n2 = (n / 2) * 2;  // complex pairs handled vectorized
  for (int i = 0; i < m; ++i) {
    const cplx* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = cd + static_cast<std::size_t>(i) * n * 2;
    for (int p = 0; p < k; ++p) {
      const cplx aip = arow[p];
      if (aip == cplx{0.0, 0.0}) continue;
      const __m256d var = _mm256_set1_pd(aip.real());
      const __m256d vai = _mm256_set1_pd(aip.imag());
      const double* brow = bd + static_cast<std::size_t>(p) * n * 2;
      int j = 0;
      for (; j + 4 <= n2; j += 4) {
        __m256d vb0 = _mm256_loadu_pd(brow + 2 * j);
        __m256d vb1 = _mm256_loadu_pd(brow + 2 * j + 4);
        __m256d vc0 = _mm256_loadu_pd(crow + 2 * j);
        __m256d vc1 = _mm256_loadu_pd(crow + 2 * j + 4);
        vc0 = _mm256_add_pd(vc0, cmul_broadcast(var, vai, vb0));
        vc1 = _mm256_add_pd(vc1, cmul_broadcast(var, vai, vb1));
        _mm256_storeu_pd(crow + 2 * j, vc0);
        _mm256_storeu_pd(crow + 2 * j + 4, vc1);
      }
      for (; j + 2 <= n2; j += 2) {
        __m256d vb0 = _mm256_loadu_pd(brow + 2 * j);
        __m256d vc0 = _mm256_loadu_pd(crow + 2 * j);
        vc0 = _mm256_add_pd(vc0, cmul_broadcast(var, vai, vb0));
        _mm256_storeu_pd(crow + 2 * j, vc0);
      }
      if (j < n) {
        // odd tail element
        const cplx bpj = b[static_cast<std::size_t>(p) * n + j];
        c[static_cast<std::size_t>(i) * n + j] += aip * bpj;
      }
    }
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d var = _mm256_set1_pd(alpha.real());
  const __m256d vai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    __m256d vy = _mm256_loadu_pd(yd + 2 * i);
    vy = _mm256_add_pd(vy, cmul_broadcast(var, vai, vx));
    _mm256_storeu_pd(yd + 2 * i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal_avx2(cplx alpha, cplx* x, std::size_t n) {
  const __m256d var = _mm256_set1_pd(alpha.real());
  const __m256d vai = _mm256_set1_pd(alpha.imag());
  double* xd = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, cmul_broadcast(var, vai, vx));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

cplx dotc_avx2(const cplx* x, const cplx* y, std::size_t n) {
  // conj(x)*y: re = xr*yr + xi*yi, im = xr*yi - xi*yr.  Accumulate the two
  // lanes separately with fmsubadd: (xr*y) -/+ (xi*swap(y)) gives
  // [xr*yr - (-..)] -- easier to just run two fused accumulators.
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    __m256d vy = _mm256_loadu_pd(yd + 2 * i);
    // products per slot: [xr*yr, xi*yi, ...] -> add into acc_re
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    // [xr*yi, xi*yr, ...] with sign pattern (+, -) per complex
    __m256d vys = _mm256_permute_pd(vy, 0x5);
    acc_im = _mm256_fmadd_pd(vx, vys, acc_im);
  }
  alignas(32) double re4[4], im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = re4[0] + re4[1] + re4[2] + re4[3];
  double im = (im4[0] - im4[1]) + (im4[2] - im4[3]);
  for (; i < n; ++i) {
    const cplx t = std::conj(x[i]) * y[i];
    re += t.real();
    im += t.imag();
  }
  return {re, im};
}

double nrm2sq_avx2(const cplx* x, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d vx = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  alignas(32) double s4[4];
  _mm256_store_pd(s4, acc);
  double s = s4[0] + s4[1] + s4[2] + s4[3];
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

constexpr Kernels kAvx2{gemm_acc_avx2, axpy_avx2, scal_avx2, dotc_avx2,
                        nrm2sq_avx2, "avx2"};

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

bool simd_available() {
  static const bool ok = cpu_has_avx2();
  return ok;
}

const Kernels& simd_kernels() { return simd_available() ? kAvx2 : scalar_kernels(); }

}  // namespace ctspin::simd

#endif  // CTSPIN_HAVE_AVX2
