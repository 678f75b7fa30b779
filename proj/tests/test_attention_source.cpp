#include <gtest/gtest.h>

#include "lasmut/attention/source.hpp"
#include "lasmut/frontend/frontend.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"
#include "support.hpp"

using namespace lasmut::attention;
using lasmut::testing::ScratchDir;

namespace {

lasmut::frontend::MethodRecord sample_method() {
  auto m = lasmut::frontend::frontend_for("java").parse_method("int f(int a) { int b = a + 1; return b; }");
  m.id = "src/F.java::F.f#00000000";
  m.file = "src/F.java";
  return m;
}

}  // namespace

TEST(AttentionSource, SyntheticSetsMethodId) {
  const auto b = SyntheticSource().lookup(sample_method());
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->method_id, sample_method().id);
}

TEST(AttentionSource, DumpDirectoryLookup) {
  ScratchDir dir("dumps");
  const auto m = sample_method();
  DumpDirectorySource src(dir.path());
  EXPECT_FALSE(src.lookup(m).has_value());
  write_dump(dir / dump_file_name(m.id), synthetic_attention(m.text()));
  const auto b = src.lookup(m);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->matrix, synthetic_attention(m.text()).matrix);
}

TEST(AttentionSource, DumpDirectoryRejectsMismatchedText) {
  ScratchDir dir("dumps");
  const auto m = sample_method();
  auto b = synthetic_attention(m.text() + "          extra text");
  write_dump(dir / dump_file_name(m.id), b);
  EXPECT_THROW(DumpDirectorySource(dir.path()).lookup(m), lasmut::ShapeError);
}

TEST(AttentionSource, ExtractorCommandFollowsDumpContract) {
  ScratchDir dir("extractor");
  const auto m = sample_method();
  ExtractorCommandSource src(lasmut::util::shell_quote(lasmut::testing::cli_path().string()) + " dump",
                             "synthetic-v1", dir / "cache");
  const auto b = src.lookup(m);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->matrix, synthetic_attention(m.text()).matrix);
  EXPECT_TRUE(std::filesystem::exists(dir / "cache" / dump_file_name(m.id)));
}

TEST(AttentionSource, FailingExtractorYieldsNothing) {
  ScratchDir dir("extractor");
  ExtractorCommandSource src("false", "some-model", dir / "cache");
  EXPECT_FALSE(src.lookup(sample_method()).has_value());
}

TEST(AttentionSource, Factory) {
  EXPECT_EQ(make_attention_source("synthetic", "synthetic-v1", "c")->describe(), "synthetic-v1");
  EXPECT_EQ(make_attention_source("dir:/tmp/x", "m", "c")->describe(), "dir:/tmp/x");
  EXPECT_EQ(make_attention_source("cmd:extract.py", "m", "c")->describe(), "cmd:extract.py");
  EXPECT_THROW(make_attention_source("synthetic", "codebert", "c"), lasmut::ConfigError);
  EXPECT_THROW(make_attention_source("http://x", "m", "c"), lasmut::ConfigError);
}
