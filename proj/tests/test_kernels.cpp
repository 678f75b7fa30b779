#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lasmut/kernels/kernels.hpp"
#include "lasmut/util/error.hpp"

namespace k = lasmut::kernels;

namespace {

std::vector<double> random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(rows * cols);
  for (auto& x : m) x = u(rng);
  return m;
}

class IsaGuard {
 public:
  IsaGuard() : saved_(k::active_isa()) {}
  ~IsaGuard() { k::set_isa(saved_); }

 private:
  k::Isa saved_;
};

}  // namespace

TEST(Kernels, ScalarIsAlwaysAvailable) {
  const auto isas = k::available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), k::Isa::scalar);
}

TEST(Kernels, EveryIsaMatchesScalar) {
  IsaGuard guard;
  const std::pair<std::size_t, std::size_t> shapes[] = {{1, 1}, {3, 5}, {7, 7}, {9, 4}, {17, 33}, {64, 64}};
  for (const auto& [rows, cols] : shapes) {
    const auto m = random_matrix(rows, cols, static_cast<unsigned>(rows * 131 + cols));
    std::vector<double> ref_col(cols), ref_row(rows);
    k::scalar::column_sums(m.data(), rows, cols, ref_col.data());
    k::scalar::row_sums(m.data(), rows, cols, ref_row.data());
    std::vector<double> factors(rows);
    for (std::size_t i = 0; i < rows; ++i) factors[i] = 0.5 + static_cast<double>(i);
    auto ref_scaled = m;
    k::scalar::scale_rows(ref_scaled.data(), rows, cols, factors.data());

    for (const auto isa : k::available_isas()) {
      k::set_isa(isa);
      SCOPED_TRACE(std::string(k::isa_name(isa)) + " " + std::to_string(rows) + "x" + std::to_string(cols));
      std::vector<double> col(cols), row(rows);
      k::column_sums(m, rows, cols, col);
      k::row_sums(m, rows, cols, row);
      auto scaled = m;
      k::scale_rows(scaled, rows, cols, factors);
      for (std::size_t j = 0; j < cols; ++j) EXPECT_NEAR(col[j], ref_col[j], 1e-12);
      for (std::size_t i = 0; i < rows; ++i) EXPECT_NEAR(row[i], ref_row[i], 1e-12);
      for (std::size_t i = 0; i < m.size(); ++i) EXPECT_DOUBLE_EQ(scaled[i], ref_scaled[i]);
    }
  }
}

TEST(Kernels, ColumnSumsHandExample) {
  const std::vector<double> m{0.7, 0.3, 0.4, 0.6};
  std::vector<double> out(2);
  k::column_sums(m, 2, 2, out);
  EXPECT_NEAR(out[0], 1.1, 1e-15);
  EXPECT_NEAR(out[1], 0.9, 1e-15);
}

TEST(Kernels, ShapeMismatchThrows) {
  const std::vector<double> m(6, 1.0);
  std::vector<double> out(2);
  std::vector<double> one(1);
  EXPECT_THROW(k::column_sums(m, 2, 2, out), lasmut::ShapeError);
  EXPECT_THROW(k::row_sums(m, 2, 3, one), lasmut::ShapeError);
  EXPECT_THROW(k::scale_rows(std::span<double>(out), 2, 3, one), lasmut::ShapeError);
}

TEST(Kernels, IsaNames) {
  EXPECT_EQ(k::isa_name(k::Isa::scalar), "scalar");
  EXPECT_EQ(k::isa_name(k::Isa::avx2), "avx2");
  EXPECT_EQ(k::isa_name(k::Isa::neon), "neon");
}
