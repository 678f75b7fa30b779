#pragma once
// Dense reductions over row-major attention matrices.
//
// Each kernel has a scalar reference implementation and optional SIMD
// variants (AVX2 on x86-64, NEON on AArch64). The active variant is chosen
// once at runtime from the host CPU and can be forced through the
// LASMUT_ISA environment variable ("scalar", "avx2", "neon") or set_isa().
//
// column_sums and scale_rows are bit-identical across variants: both keep the
// scalar operation order per output element. row_sums reassociates the
// additions and agrees with the scalar reference to rounding.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lasmut::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

// Variants compiled in and supported by this CPU; scalar is always present.
std::vector<Isa> available_isas();

Isa active_isa();

// Forces a variant; throws ConfigError if it is not available.
void set_isa(Isa isa);

// out[j] = sum_i m[i*cols + j], summed in increasing i.
void column_sums(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<double> out);

// out[i] = sum_j m[i*cols + j].
void row_sums(std::span<const double> m, std::size_t rows, std::size_t cols,
              std::span<double> out);

// m[i*cols + j] *= factors[i].
void scale_rows(std::span<double> m, std::size_t rows, std::size_t cols,
                std::span<const double> factors);

// Explicit variants, used by the equivalence tests and benchmarks.
namespace scalar {
void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void row_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define LASMUT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void row_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define LASMUT_HAVE_NEON_KERNELS 1
namespace neon {
void column_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void row_sums(const double* m, std::size_t rows, std::size_t cols, double* out);
void scale_rows(double* m, std::size_t rows, std::size_t cols, const double* factors);
}  // namespace neon
#endif

}  // namespace lasmut::kernels
