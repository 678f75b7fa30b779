// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "lasmut/kernels/kernels.hpp"

namespace lasmut::kernels::avx2 {

void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out) {
  std::size_t j = 0;
  // Four columns per lane group, four groups per pass to keep loads in flight.
  for (; j + 16 <= cols; j += 16) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = m + i * cols + j;
      a0 = _mm256_add_pd(a0, _mm256_loadu_pd(row));
      a1 = _mm256_add_pd(a1, _mm256_loadu_pd(row + 4));
      a2 = _mm256_add_pd(a2, _mm256_loadu_pd(row + 8));
      a3 = _mm256_add_pd(a3, _mm256_loadu_pd(row + 12));
    }
    _mm256_storeu_pd(out + j, a0);
    _mm256_storeu_pd(out + j + 4, a1);
    _mm256_storeu_pd(out + j + 8, a2);
    _mm256_storeu_pd(out + j + 12, a3);
  }
  for (; j + 4 <= cols; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < rows; ++i) acc = _mm256_add_pd(acc, _mm256_loadu_pd(m + i * cols + j));
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += m[i * cols + j];
    out[j] = acc;
  }
}

void row_sums(const double* m, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(row + j));
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    lo = _mm_add_sd(lo, _mm_unpackhi_pd(lo, lo));
    double total = _mm_cvtsd_f64(lo);
    for (; j < cols; ++j) total += row[j];
    out[i] = total;
  }
}

void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = m + i * cols;
    const __m256d f = _mm256_set1_pd(factors[i]);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) _mm256_storeu_pd(row + j, _mm256_mul_pd(_mm256_loadu_pd(row + j), f));
    for (; j < cols; ++j) row[j] *= factors[i];
  }
}

}  // namespace lasmut::kernels::avx2
