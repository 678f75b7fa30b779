#include <gtest/gtest.h>

#include "lasmut/attention/bundle.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/hash.hpp"
#include "lasmut/util/jsonl.hpp"
#include "support.hpp"

using namespace lasmut::attention;
using lasmut::ShapeError;

namespace {

AttentionBundle two_by_two() {
  AttentionBundle b;
  b.model_id = "m";
  b.num_layers = 2;
  b.num_heads = 3;
  b.subtokens = {{"a", 0, 1, false}, {"b", 2, 3, false}};
  b.matrix = {0.7, 0.3, 0.4, 0.6};
  return b;
}

}  // namespace

TEST(Bundle, ValidBundlePasses) { EXPECT_NO_THROW(validate(two_by_two(), 3)); }

TEST(Bundle, RowSumTolerance) {
  auto b = two_by_two();
  b.matrix = {0.70005, 0.3, 0.4, 0.6};
  EXPECT_NO_THROW(validate(b));
  b.matrix = {0.7002, 0.3, 0.4, 0.6};
  EXPECT_THROW(validate(b), ShapeError);
}

TEST(Bundle, Rejections) {
  auto b = two_by_two();
  b.aggregated = false;
  EXPECT_THROW(validate(b), ShapeError);
  b = two_by_two();
  b.matrix.pop_back();
  EXPECT_THROW(validate(b), ShapeError);
  b = two_by_two();
  b.matrix = {1.3, -0.3, 0.4, 0.6};
  EXPECT_THROW(validate(b), ShapeError);
  b = two_by_two();
  b.subtokens = {{"a", 2, 3, false}, {"b", 0, 1, false}};
  EXPECT_THROW(validate(b), ShapeError);
  b = two_by_two();
  EXPECT_THROW(validate(b, 2), ShapeError);  // span ends past the text
  b = two_by_two();
  b.subtokens.clear();
  b.matrix.clear();
  EXPECT_THROW(validate(b), ShapeError);
}

TEST(Bundle, JsonSchema) {
  auto b = two_by_two();
  b.method_id = "x::T.m#1";
  const nlohmann::json j = b;
  EXPECT_EQ(j.at("matrix"), nlohmann::json::parse("[[0.7,0.3],[0.4,0.6]]"));
  EXPECT_EQ(j.at("subtokens").at(1), nlohmann::json::parse(R"({"text":"b","start":2,"end":3,"special":false})"));
  EXPECT_TRUE(j.at("aggregated").get<bool>());
  EXPECT_EQ(j.at("num_layers"), 2);
  EXPECT_EQ(j.at("num_heads"), 3);
  EXPECT_FALSE(j.contains("truncated_from"));
  EXPECT_EQ(j.get<AttentionBundle>(), b);
}

TEST(Bundle, NonSquareJsonRejected) {
  auto j = nlohmann::json(two_by_two());
  j["matrix"] = nlohmann::json::parse("[[0.5,0.5],[1.0]]");
  EXPECT_THROW(j.get<AttentionBundle>(), ShapeError);
}

TEST(Bundle, DumpFileRoundTripIsByteStable) {
  lasmut::testing::ScratchDir dir("bundle");
  const auto b = two_by_two();
  write_dump(dir / "a.json", b);
  const auto back = read_dump(dir / "a.json");
  EXPECT_EQ(back, b);
  write_dump(dir / "b.json", back);
  EXPECT_EQ(lasmut::util::sha256_file(dir / "a.json"), lasmut::util::sha256_file(dir / "b.json"));
}

TEST(Bundle, ReadDumpReportsMalformedFiles) {
  lasmut::testing::ScratchDir dir("bundle");
  lasmut::util::write_file(dir / "bad.json", "{\"model_id\": 1}");
  EXPECT_THROW(read_dump(dir / "bad.json"), ShapeError);
}

TEST(Bundle, DumpFileName) {
  const std::string id = "src/A.java::p.A.f#12345678";
  EXPECT_EQ(dump_file_name(id), lasmut::util::sha256_hex(id).substr(0, 16) + ".json");
}
