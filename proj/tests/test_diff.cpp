#include <gtest/gtest.h>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/error.hpp"

using namespace lasmut::frontend;

namespace {

const char* kOriginal =
    "int f(int a) {\n"
    "  int b = a + 1;\n"
    "  if (b > 2) {\n"
    "    b = 2;\n"
    "  }\n"
    "  return b;\n"
    "}";

MethodRecord original() { return frontend_for("java").parse_method(kOriginal); }

}  // namespace

TEST(Diff, IdenticalAndWhitespaceOnlyChangesAreEmpty) {
  EXPECT_TRUE(diff_statements(original(), kOriginal).empty());
  EXPECT_TRUE(diff_statements(original(), "int f(int a) { int b=a+1; if (b>2) { b=2; } return  b; }").empty());
  EXPECT_TRUE(diff_statements(original(), "int f(int a) { int b = a + 1; // c\n if (b > 2) { b = 2; } return b; }")
                  .empty());
}

TEST(Diff, Modified) {
  const auto d = diff_statements(original(), "int f(int a) { int b = a - 1; if (b > 2) { b = 2; } return b; }");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], (StatementDiff{DiffKind::modified, 0, 0}));
}

TEST(Diff, Removed) {
  const auto d = diff_statements(original(), "int f(int a) { int b = a + 1; if (b > 2) { } return b; }");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], (StatementDiff{DiffKind::removed, 2, std::nullopt}));
}

TEST(Diff, Added) {
  const auto d =
      diff_statements(original(), "int f(int a) { int b = a + 1; if (b > 2) { b = 2; b++; } return b; }");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], (StatementDiff{DiffKind::added, std::nullopt, 3}));
}

TEST(Diff, MixedEditsInOrder) {
  const auto d = diff_statements(original(), "int f(int a) { if (b >= 2) { b = 2; } return b; log(); }");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[0], (StatementDiff{DiffKind::modified, 0, 0}));
  EXPECT_EQ(d[1], (StatementDiff{DiffKind::removed, 1, std::nullopt}));
  EXPECT_EQ(d[2], (StatementDiff{DiffKind::added, std::nullopt, 3}));
}

TEST(Diff, UnparseableMutantThrows) {
  EXPECT_THROW(diff_statements(original(), "int f(int a) { return b }"), lasmut::ParseError);
}

TEST(Diff, JsonRoundTrip) {
  const StatementDiff d{DiffKind::removed, 4, std::nullopt};
  const nlohmann::json j = d;
  EXPECT_EQ(j.dump(), R"({"kind":"removed","mutant":null,"original":4})");
  EXPECT_EQ(j.get<StatementDiff>(), d);
}
