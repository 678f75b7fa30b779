#include "lasmut/kernels/kernels.hpp"

namespace lasmut::kernels::scalar {

void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j];
  }
}

void row_sums(const double* m, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = m + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j];
    out[i] = acc;
  }
}

void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* row = m + i * cols;
    const double f = factors[i];
    for (std::size_t j = 0; j < cols; ++j) row[j] *= f;
  }
}

}  // namespace lasmut::kernels::scalar
