// AVX2/FMA variants. Compiled with -mavx2 -mfma and only reached through the
// runtime dispatch in dispatch.cpp.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "swrl/simd/kernels.hpp"

namespace swrl::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

// Natural log for positive normal inputs. x = m * 2^e with m in
// [sqrt(1/2), sqrt(2)); log m = 2 atanh(s), s = (m-1)/(m+1), |s| < 0.1716,
// summed as an odd series to 12 terms (truncation below 1e-19).
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent -> double via the 2^52 magic constant.
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic_bits)),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);

  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) {
    p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / (2.0 * k + 1.0)));
  }
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), p);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
  }
  for (; i + 4 <= n; i += 4) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  }
  double acc = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_squares_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

ClippedLogSum neg_log_affine_sum_avx2(const double* x, std::size_t n, double offset, double scale,
                                      double eps) {
  const __m256d off = _mm256_set1_pd(offset);
  const __m256d sc = _mm256_set1_pd(scale);
  const __m256d ep = _mm256_set1_pd(eps);
  __m256d acc = _mm256_setzero_pd();
  std::size_t clipped = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d arg = _mm256_fmadd_pd(sc, _mm256_loadu_pd(x + i), off);
    const __m256d low = _mm256_cmp_pd(arg, ep, _CMP_NGT_UQ);
    clipped += static_cast<std::size_t>(std::popcount(
        static_cast<unsigned>(_mm256_movemask_pd(low))));
    arg = _mm256_blendv_pd(arg, ep, low);
    acc = _mm256_add_pd(acc, log_pd(arg));
  }
  ClippedLogSum out{-hsum(acc), clipped};
  for (; i < n; ++i) {
    double arg = offset + scale * x[i];
    if (!(arg > eps)) {
      arg = eps;
      ++out.clipped;
    }
    out.value -= std::log(arg);
  }
  return out;
}

void exp_trunc_batch_avx2(const double* z, std::size_t n, unsigned degree, double* out) {
  std::size_t i = 0;
  const __m256d tiny = _mm256_set1_pd(0x1p-60);
  for (; i + 4 <= n; i += 4) {
    const __m256d zi = _mm256_loadu_pd(z + i);
    const __m256d two_z = _mm256_add_pd(zi, zi);
    __m256d term = _mm256_set1_pd(1.0);
    __m256d sum = term;
    for (unsigned d = 1; d <= degree; ++d) {
      const __m256d dd = _mm256_set1_pd(static_cast<double>(d));
      term = _mm256_div_pd(_mm256_mul_pd(term, zi), dd);
      sum = _mm256_add_pd(sum, term);
      const __m256d past_peak = _mm256_cmp_pd(dd, two_z, _CMP_GE_OQ);
      const __m256d negligible = _mm256_cmp_pd(term, _mm256_mul_pd(sum, tiny), _CMP_LE_OQ);
      if (_mm256_movemask_pd(_mm256_and_pd(past_peak, negligible)) == 0xF) break;
    }
    _mm256_storeu_pd(out + i, sum);
  }
  for (; i < n; ++i) {
    double term = 1.0;
    double sum = 1.0;
    for (unsigned d = 1; d <= degree; ++d) {
      term = term * z[i] / static_cast<double>(d);
      sum += term;
      if (static_cast<double>(d) >= 2.0 * z[i] && term <= sum * 0x1p-60) break;
    }
    out[i] = sum;
  }
}

void axpy_avx2(double* row, const double* x, std::size_t n, double coeff) {
  const __m256d c = _mm256_set1_pd(coeff);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d prod = _mm256_mul_pd(c, _mm256_loadu_pd(x + j));
    _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), prod));
  }
  for (; j < n; ++j) {
    const double prod = coeff * x[j];
    row[j] = row[j] + prod;
  }
}

constexpr KernelTable kAvx2{
    Level::avx2,          dot_avx2,  sum_squares_avx2, neg_log_affine_sum_avx2,
    exp_trunc_batch_avx2, axpy_avx2,
};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace swrl::simd
