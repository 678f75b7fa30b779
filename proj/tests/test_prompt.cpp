#include <gtest/gtest.h>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/generator/prompt.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/jsonl.hpp"
#include "support.hpp"

using namespace lasmut::generator;

namespace {

lasmut::frontend::MethodRecord method() {
  auto m = lasmut::frontend::frontend_for("java").parse_method(
      "int f(int a) {\n  int b = a + 1;\n  if (b > 2) {\n    b = 2;\n  }\n  return b;\n}");
  m.id = "F.java::F.f#1";
  return m;
}

}  // namespace

TEST(Prompt, IndexMethodMarksEveryStatement) {
  const auto m = method();
  const std::string indexed = index_method(m);
  EXPECT_EQ(indexed,
            "int f(int a) {\n  /*0*/int b = a + 1;\n  /*1*/if (b > 2) {\n    /*2*/b = 2;\n  }\n  /*3*/return b;\n}");
  EXPECT_EQ(lasmut::frontend::frontend_for("java").strip_index_markers(indexed), m.text());
}

TEST(Prompt, IndexMarkersRoundTripOnFixtureMethods) {
  const auto& fe = lasmut::frontend::frontend_for("java");
  for (const auto& m : lasmut::frontend::extract_methods(lasmut::testing::fixture("java_project")).methods) {
    const std::string indexed = index_method(m);
    EXPECT_EQ(fe.strip_index_markers(indexed), m.text()) << m.id;
    EXPECT_TRUE(fe.is_parseable(indexed)) << m.id;
  }
}

TEST(Prompt, RenderedPromptCarriesConstraints) {
  const auto p = build_prompt(method(), {3, 1}, 2);
  EXPECT_EQ(p.template_id, "las-v1");
  EXPECT_EQ(p.method_id, "F.java::F.f#1");
  EXPECT_EQ(p.las_indices, (std::vector<int>{3, 1}));
  EXPECT_NE(p.rendered.find("Inject 2 different bugs"), std::string::npos);
  EXPECT_NE(p.rendered.find("locations 3, 1"), std::string::npos);
  EXPECT_NE(p.rendered.find(p.indexed_method), std::string::npos);
  EXPECT_EQ(p.rendered.find("{n}"), std::string::npos);
  EXPECT_EQ(p.estimated_tokens, estimate_tokens(p.rendered));
}

TEST(Prompt, BracesInTheMethodAreNotPlaceholders) {
  auto m = lasmut::frontend::frontend_for("java").parse_method("String f() { return \"{n} {locations}\"; }");
  const auto p = build_prompt(m, {0}, 1);
  EXPECT_NE(p.rendered.find("return \"{n} {locations}\";"), std::string::npos);
}

TEST(Prompt, Errors) {
  EXPECT_THROW(build_prompt(method(), {}, 1), lasmut::Error);
  EXPECT_THROW(build_prompt(method(), {0}, 0), lasmut::Error);
  EXPECT_THROW(build_prompt(method(), {9}, 1), lasmut::Error);
  EXPECT_THROW(build_prompt(method(), {0}, 1, load_template("las-v1"), 10), PromptTooLarge);
  auto empty = method();
  empty.statements.clear();
  EXPECT_THROW(index_method(empty), lasmut::Error);
}

TEST(Prompt, TemplateFiles) {
  lasmut::testing::ScratchDir dir("tmpl");
  lasmut::util::write_file(dir / "short.txt", "Bugs: {n} at {locations}\n{method}\n");
  const auto t = load_template("file:" + (dir / "short.txt").string());
  EXPECT_EQ(t.id, "short");
  const auto p = build_prompt(method(), {0}, 3, t);
  EXPECT_EQ(p.rendered.rfind("Bugs: 3 at 0\n", 0), 0u);
  lasmut::util::write_file(dir / "bad.txt", "no slots");
  EXPECT_THROW(load_template("file:" + (dir / "bad.txt").string()), lasmut::ConfigError);
  EXPECT_THROW(load_template("las-v9"), lasmut::ConfigError);
}

TEST(Prompt, JsonRoundTrip) {
  const auto p = build_prompt(method(), {0, 2}, 3);
  const nlohmann::json j = p;
  const auto back = j.get<PromptSpec>();
  EXPECT_EQ(nlohmann::json(back), j);
}
