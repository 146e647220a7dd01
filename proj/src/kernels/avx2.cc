// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check, so nothing here may be called from generic code.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "gammalab/kernels.h"

namespace gammalab::kernels {
namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

// exp(x) with Cody-Waite reduction x = n ln2 + r, |r| <= ln2 / 2, and a
// degree-13 Taylor polynomial for e^r (truncation below 1e-17 relative).
// 2^n is applied in two halves so results stay graded into the subnormals.
__m256d exp_pd(__m256d x) {
  const __m256d lower = _mm256_set1_pd(-745.2);
  const __m256d upper = _mm256_set1_pd(709.78);
  const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lower), upper);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double kInvFactorial[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(kInvFactorial[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFactorial[i]));

  const __m256d half_n = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d rest_n = _mm256_sub_pd(n, half_n);
  auto pow2 = [](__m256d e) {
    const __m128i e32 = _mm256_cvtpd_epi32(e);
    __m256i bits = _mm256_cvtepi32_epi64(e32);
    bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    return _mm256_castsi256_pd(bits);
  };
  __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2(half_n)), pow2(rest_n));
  return _mm256_andnot_pd(underflow, result);
}

void scores_avx2(std::span<const double> cols, std::span<const double> x, std::span<double> out) {
  const std::size_t m = out.size();
  const std::size_t d = x.size();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < d; ++k) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(cols.data() + k * m + i), _mm256_set1_pd(x[k]), acc);
    }
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) acc = std::fma(cols[k * m + i], x[k], acc);
    out[i] = acc;
  }
}

double max_avx2(std::span<const double> v) {
  const std::size_t m = v.size();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (m >= 4) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= m; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v.data() + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double lane : lanes) best = lane > best ? lane : best;
  }
  for (; i < m; ++i) best = v[i] > best ? v[i] : best;
  return best;
}

double exp_shifted_avx2(std::span<const double> v, double shift, double scale,
                        std::span<double> out) {
  const std::size_t m = v.size();
  const __m256d vshift = _mm256_set1_pd(shift);
  const __m256d vscale = _mm256_set1_pd(scale);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d arg = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(v.data() + i), vshift), vscale);
    const __m256d e = exp_pd(arg);
    _mm256_storeu_pd(out.data() + i, e);
    acc = _mm256_add_pd(acc, e);
  }
  double sum = hsum(acc);
  if (i < m) {
    alignas(32) double in[4] = {0.0, 0.0, 0.0, 0.0};
    alignas(32) double res[4];
    const std::size_t tail = m - i;
    for (std::size_t j = 0; j < tail; ++j) in[j] = (v[i + j] - shift) * scale;
    _mm256_store_pd(res, exp_pd(_mm256_load_pd(in)));
    for (std::size_t j = 0; j < tail; ++j) {
      out[i + j] = res[j];
      sum += res[j];
    }
  }
  return sum;
}

void weighted_columns_avx2(std::span<const double> cols, std::span<const double> w,
                           std::span<double> out) {
  const std::size_t m = w.size();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* col = cols.data() + k * m;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(col + i), acc);
    }
    double total = hsum(acc);
    for (; i < m; ++i) total = std::fma(w[i], col[i], total);
    out[k] = total;
  }
}

double kinetic_avx2(std::span<const double> nodes, std::size_t d, std::span<const double> times) {
  const std::size_t segments = times.size() < 2 ? 0 : times.size() - 1;
  const double* x = nodes.data();
  const double* t = times.data();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (d == 1) {
    for (; i + 4 <= segments; i += 4) {
      const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i + 1), _mm256_loadu_pd(x + i));
      const __m256d dt = _mm256_sub_pd(_mm256_loadu_pd(t + i + 1), _mm256_loadu_pd(t + i));
      acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(dx, dx), dt));
    }
  } else if (d == 2) {
    // Two segments per register: lanes (x0, y0, x1, y1).
    for (; i + 2 <= segments; i += 2) {
      const __m256d dx =
          _mm256_sub_pd(_mm256_loadu_pd(x + 2 * (i + 1)), _mm256_loadu_pd(x + 2 * i));
      const __m128d dt2 = _mm_sub_pd(_mm_loadu_pd(t + i + 1), _mm_loadu_pd(t + i));
      const __m256d dt = _mm256_permute4x64_pd(_mm256_castpd128_pd256(dt2), 0b01010000);
      acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(dx, dx), dt));
    }
  }
  double total = hsum(acc);
  for (; i < segments; ++i) {
    const double* a = x + i * d;
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = a[d + k] - a[k];
      sq += diff * diff;
    }
    total += sq / (t[i + 1] - t[i]);
  }
  return total;
}

}  // namespace

namespace detail {
const Backend& avx2_table() {
  static const Backend backend{"avx2",
                               scores_avx2,
                               max_avx2,
                               exp_shifted_avx2,
                               weighted_columns_avx2,
                               kinetic_avx2};
  return backend;
}
}  // namespace detail

}  // namespace gammalab::kernels
