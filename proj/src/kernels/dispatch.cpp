#include <atomic>
#include <cstdlib>
#include <string>

#include "lasmut/kernels/kernels.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::kernels {

namespace {

struct KernelTable {
  void (*column_sums)(const double*, std::size_t, std::size_t, double*);
  void (*row_sums)(const double*, std::size_t, std::size_t, double*);
  void (*scale_rows)(double*, std::size_t, std::size_t, const double*);
};

constexpr KernelTable kScalarTable{scalar::column_sums, scalar::row_sums, scalar::scale_rows};
#ifdef LASMUT_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{avx2::column_sums, avx2::row_sums, avx2::scale_rows};
#endif
#ifdef LASMUT_HAVE_NEON_KERNELS
constexpr KernelTable kNeonTable{neon::column_sums, neon::row_sums, neon::scale_rows};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef LASMUT_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#ifdef LASMUT_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  switch (isa) {
#ifdef LASMUT_HAVE_AVX2_KERNELS
    case Isa::avx2:
      return kAvx2Table;
#endif
#ifdef LASMUT_HAVE_NEON_KERNELS
    case Isa::neon:
      return kNeonTable;
#endif
    default:
      return kScalarTable;
  }
}

Isa detect() {
  if (const char* forced = std::getenv("LASMUT_ISA")) {
    const std::string name = forced;
    for (Isa isa : available_isas()) {
      if (isa_name(isa) == name) return isa;
    }
  }
  const auto isas = available_isas();
  return isas.back();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    throw ConfigError("kernel variant not available: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

void column_sums(std::span<const double> m, std::size_t rows, std::size_t cols,
                 std::span<double> out) {
  if (m.size() != rows * cols || out.size() != cols) throw ShapeError("column_sums: shape mismatch");
  table_for(active_isa()).column_sums(m.data(), rows, cols, out.data());
}

void row_sums(std::span<const double> m, std::size_t rows, std::size_t cols,
              std::span<double> out) {
  if (m.size() != rows * cols || out.size() != rows) throw ShapeError("row_sums: shape mismatch");
  table_for(active_isa()).row_sums(m.data(), rows, cols, out.data());
}

void scale_rows(std::span<double> m, std::size_t rows, std::size_t cols,
                std::span<const double> factors) {
  if (m.size() != rows * cols || factors.size() != rows) throw ShapeError("scale_rows: shape mismatch");
  table_for(active_isa()).scale_rows(m.data(), rows, cols, factors.data());
}

}  // namespace lasmut::kernels
