#include "kgframe/simd/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define KGFRAME_HAVE_AVX2 1
#else
#define KGFRAME_HAVE_AVX2 0
#endif

namespace kgframe::simd::avx2 {

#if KGFRAME_HAVE_AVX2

bool compiled() noexcept { return true; }

// One __m256d holds two complex<double> as [re0, im0, re1, im1].
// For a broadcast scalar a = ar + i*ai:
//   a*b = fmaddsub(ar, b, ai * swap(b)) = [ar*br - ai*bi, ar*bi + ai*br, ...]
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cd = reinterpret_cast<double*>(c);
  const std::size_t n2 = n & ~std::size_t{1};

  for (std::size_t i = 0; i < m; ++i) {
    double* crow = cd + 2 * i * n;
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;

    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const __m256d vr = _mm256_set1_pd(ar);
      const __m256d vi = _mm256_set1_pd(ai);
      const double* brow = bd + 2 * p * n;

      std::size_t j = 0;
      for (; j < n2; j += 2) {
        const __m256d bv = _mm256_loadu_pd(brow + 2 * j);
        const __m256d bs = _mm256_permute_pd(bv, 0b0101);
        const __m256d prod = _mm256_fmaddsub_pd(vr, bv, _mm256_mul_pd(vi, bs));
        _mm256_storeu_pd(crow + 2 * j, _mm256_add_pd(_mm256_loadu_pd(crow + 2 * j), prod));
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

double sum_abs_sq(const cplx* x, std::size_t len) {
  const auto* xd = reinterpret_cast<const double*>(x);
  const std::size_t total = 2 * len;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= total; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(xd + i);
    const __m256d v1 = _mm256_loadu_pd(xd + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  for (; i + 4 <= total; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(xd + i);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < total; ++i) acc += xd[i] * xd[i];
  return acc;
}

#else

bool compiled() noexcept { return false; }

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m, std::size_t k, std::size_t n) {
  scalar::matmul(a, b, c, m, k, n);
}

double sum_abs_sq(const cplx* x, std::size_t len) { return scalar::sum_abs_sq(x, len); }

#endif

}  // namespace kgframe::simd::avx2
