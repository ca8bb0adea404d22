// AVX2 variant of the Gaussian kernel-sum. Compiled with -mavx2 and reached
// only through the runtime dispatcher in kernels.cpp.

#include "drumscope/kernels.hpp"

#if defined(DRUMSCOPE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <numbers>

namespace drumscope::kernels {

namespace {

// exp for four doubles, Cephes-style: n = round(x/ln2), r = x - n*ln2 via a
// hi/lo split, rational approximation on r, then scale by 2^n through the
// exponent field. Valid for x in [-700, 0]; callers mask smaller args to 0.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);

  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

  __m256d nd = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(nd, c1, x); // x - n*c1
  r = _mm256_fnmadd_pd(nd, c2, r);         // ... - n*c2

  __m256d r2 = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(_mm256_fmadd_pd(p0, r2, p1), r2, p2);
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(_mm256_fmadd_pd(_mm256_fmadd_pd(q0, r2, q1), r2, q2), r2, q3);
  __m256d e = _mm256_add_pd(
      _mm256_set1_pd(1.0),
      _mm256_div_pd(_mm256_add_pd(p, p), _mm256_sub_pd(q, p)));

  // 2^n via the exponent bits; n is in [-1011, 1] for our input range
  __m128i ni = _mm256_cvtpd_epi32(nd);
  __m256i nl = _mm256_cvtepi32_epi64(ni);
  __m256i pow2 = _mm256_slli_epi64(_mm256_add_epi64(nl, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));
}

}  // namespace

void gaussian_density_avx2(std::span<const double> samples, double bandwidth,
                           double grid_start, double grid_step,
                           std::span<double> out) {
  const std::size_t n = samples.size();
  if (n == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double inv_h = 1.0 / bandwidth;
  const double norm = inv_h / (static_cast<double>(n) * std::sqrt(2.0 * std::numbers::pi));

  const __m256d vinv_h = _mm256_set1_pd(inv_h);
  const __m256d vneg_half = _mm256_set1_pd(-0.5);
  const __m256d vcutoff = _mm256_set1_pd(-700.0);

  std::size_t i = 0;
  const std::size_t vec_end = out.size() & ~std::size_t{3};
  for (; i < vec_end; i += 4) {
    const double x0 = grid_start + static_cast<double>(i) * grid_step;
    __m256d x = _mm256_add_pd(
        _mm256_set1_pd(x0),
        _mm256_mul_pd(_mm256_set_pd(3.0, 2.0, 1.0, 0.0), _mm256_set1_pd(grid_step)));
    __m256d acc = _mm256_setzero_pd();
    for (double s : samples) {
      __m256d t = _mm256_mul_pd(_mm256_sub_pd(x, _mm256_set1_pd(s)), vinv_h);
      __m256d arg = _mm256_mul_pd(vneg_half, _mm256_mul_pd(t, t));
      __m256d live = _mm256_cmp_pd(arg, vcutoff, _CMP_GT_OQ);
      __m256d e = exp_pd(_mm256_max_pd(arg, vcutoff));
      acc = _mm256_add_pd(acc, _mm256_and_pd(e, live));
    }
    acc = _mm256_mul_pd(acc, _mm256_set1_pd(norm));
    _mm256_storeu_pd(out.data() + i, acc);
  }

  // scalar tail, same semantics as the reference kernel
  for (; i < out.size(); ++i) {
    const double x = grid_start + static_cast<double>(i) * grid_step;
    double acc = 0.0;
    for (double s : samples) {
      const double t = (x - s) * inv_h;
      acc += std::exp(-0.5 * t * t);
    }
    out[i] = acc * norm;
  }
}

}  // namespace drumscope::kernels

#endif  // DRUMSCOPE_HAVE_AVX2
