#include <arm_neon.h>

#include "lasmut/kernels/kernels.hpp"

namespace lasmut::kernels::neon {

void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    float64x2_t a0 = vdupq_n_f64(0.0), a1 = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = m + i * cols + j;
      a0 = vaddq_f64(a0, vld1q_f64(row));
      a1 = vaddq_f64(a1, vld1q_f64(row + 2));
    }
    vst1q_f64(out + j, a0);
    vst1q_f64(out + j + 2, a1);
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
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) acc = vaddq_f64(acc, vld1q_f64(row + j));
    double total = vaddvq_f64(acc);
    for (; j < cols; ++j) total += row[j];
    out[i] = total;
  }
}

void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = m + i * cols;
    const float64x2_t f = vdupq_n_f64(factors[i]);
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) vst1q_f64(row + j, vmulq_f64(vld1q_f64(row + j), f));
    for (; j < cols; ++j) row[j] *= factors[i];
  }
}

}  // namespace lasmut::kernels::neon
