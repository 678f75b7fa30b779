#include <gtest/gtest.h>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/frontend/parser.hpp"
#include "lasmut/frontend/token.hpp"
#include "lasmut/util/error.hpp"

using namespace lasmut::frontend;

namespace {

std::vector<std::string> texts(const std::vector<SourceToken>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> span_texts(std::string_view body) {
  std::vector<std::string> out;
  for (const auto& s : segment_statements(body)) out.push_back(s.text);
  return out;
}

}  // namespace

TEST(Lexer, KindsAndOffsets) {
  const auto lexed = lex_java("int x = a1 + 0x1F; // c\nreturn \"s\\\"t\";");
  ASSERT_EQ(texts(lexed.tokens),
            (std::vector<std::string>{"int", "x", "=", "a1", "+", "0x1F", ";", "return", "\"s\\\"t\"", ";"}));
  EXPECT_EQ(lexed.tokens[0].kind, TokenKind::keyword);
  EXPECT_EQ(lexed.tokens[1].kind, TokenKind::identifier);
  EXPECT_EQ(lexed.tokens[2].kind, TokenKind::op);
  EXPECT_EQ(lexed.tokens[5].kind, TokenKind::literal);
  EXPECT_EQ(lexed.tokens[6].kind, TokenKind::punctuation);
  EXPECT_EQ(lexed.tokens[8].kind, TokenKind::literal);
  ASSERT_EQ(lexed.comments.size(), 1u);
  for (const auto& t : lexed.tokens) EXPECT_EQ(t.end - t.start, t.text.size());
}

TEST(Lexer, LongestOperatorMatch) {
  EXPECT_EQ(texts(lex_java("a <<= b -> c :: d ++ e && f").tokens),
            (std::vector<std::string>{"a", "<<=", "b", "->", "c", "::", "d", "++", "e", "&&", "f"}));
  // '>' stays single; the parser recombines shifts and comparisons.
  EXPECT_EQ(texts(lex_java("a >>>= b >= c").tokens),
            (std::vector<std::string>{"a", ">", ">", ">", "=", "b", ">", "=", "c"}));
  EXPECT_TRUE(lasmut::frontend::is_parseable("void m() { a >>>= b >> 2; boolean x = c >= d; List<List<T>> y; }"));
}

TEST(Lexer, NumericAndCharLiterals) {
  for (const std::string lit : {"1.5e3", "10L", "0b1010", "1_000", ".5f", "'x'", "'\\n'", "true", "null"}) {
    const auto tokens = lex_java(lit).tokens;
    ASSERT_EQ(tokens.size(), 1u) << lit;
    EXPECT_EQ(tokens[0].kind, TokenKind::literal) << lit;
  }
}

TEST(Lexer, TextBlock) {
  const auto tokens = lex_java("String s = \"\"\"\n  hi \"q\"\n  \"\"\";").tokens;
  ASSERT_EQ(tokens.size(), 5u);
  EXPECT_EQ(tokens[3].kind, TokenKind::literal);
}

TEST(Lexer, UnterminatedInputsThrowParseError) {
  EXPECT_THROW(lex_java("\"abc"), lasmut::ParseError);
  EXPECT_THROW(lex_java("/* open"), lasmut::ParseError);
}

TEST(Lexer, BlankCommentsKeepsOffsets) {
  const std::string src = "a /* x\ny */ b // z\nc";
  const std::string blanked = blank_comments(src);
  ASSERT_EQ(blanked.size(), src.size());
  EXPECT_EQ(blanked.find('x'), std::string::npos);
  EXPECT_EQ(blanked[src.find('b')], 'b');
  EXPECT_EQ(blanked[src.find('\n')], '\n');
}

TEST(Segment, CompoundHeaderAndChildAreSeparateSpans) {
  EXPECT_EQ(span_texts("{ if (x) { y(); } }"), (std::vector<std::string>{"if (x)", "y();"}));
}

TEST(Segment, EmptyBodyHasNoStatements) { EXPECT_TRUE(segment_statements("{ }").empty()); }

TEST(Segment, SpansAreOrderedAndIndexed) {
  const std::string body = "{\n  int a = 1;\n  for (int i = 0; i < a; i++) {\n    a += i;\n  }\n  return a;\n}";
  const auto spans = segment_statements(body);
  ASSERT_EQ(spans.size(), 4u);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    EXPECT_EQ(spans[i].index, static_cast<int>(i));
    EXPECT_EQ(body.substr(spans[i].start, spans[i].end - spans[i].start), spans[i].text);
    if (i > 0) {
      EXPECT_GT(spans[i].start, spans[i - 1].start);
    }
  }
  EXPECT_EQ(spans[1].text, "for (int i = 0; i < a; i++)");
}

TEST(Segment, ElseBranchesAndLoops) {
  EXPECT_EQ(span_texts("{ if (a) b(); else if (c) d(); else { e(); } while (f) g(); do h(); while (i); }"),
            (std::vector<std::string>{"if (a)", "b();", "if (c)", "d();", "e();", "while (f)", "g();", "h();",
                                      "while (i);"}));
}

TEST(Segment, TryCatchSwitchAndLabels) {
  const auto spans = span_texts(
      "{ try { a(); } catch (E e) { b(); } finally { c(); } switch (x) { case 1: d(); break; default: e(); } }");
  EXPECT_EQ(spans, (std::vector<std::string>{"a();", "catch (E e)", "b();", "c();", "switch (x)", "case 1:", "d();",
                                             "break;", "default:", "e();"}));
}

TEST(Segment, LambdaBodyStaysInsideItsStatement) {
  EXPECT_EQ(span_texts("{ run(() -> { a(); b(); }); return 1; }"),
            (std::vector<std::string>{"run(() -> { a(); b(); });", "return 1;"}));
}

TEST(Segment, SyntaxErrorThrowsWithOffset) {
  try {
    segment_statements("{ int x = ; }");
    FAIL() << "expected ParseError";
  } catch (const lasmut::ParseError& e) {
    EXPECT_EQ(e.offset(), 10u);
  }
}

TEST(Parser, MethodDeclarationsParse) {
  EXPECT_TRUE(is_parseable("public int f(int a) { return a; }"));
  EXPECT_TRUE(is_parseable("<T extends Comparable<T>> T max(List<? extends T> xs) throws IOException { return null; }"));
  EXPECT_TRUE(is_parseable("@Override public String toString() { return \"x\" + (a ? 1 : 2); }"));
  EXPECT_TRUE(is_parseable("void f() { int[] a = new int[]{1, 2}; for (var x : a) { System.out.println(x); } }"));
  EXPECT_TRUE(is_parseable("Point(int x) { this.x = x; }"));
  EXPECT_TRUE(is_parseable("void f() { Object o = (String) s; if (o instanceof String t) { t.length(); } }"));
  EXPECT_TRUE(is_parseable("int g(int d) { return switch (d) { case 1 -> 2; default -> { yield 3; } }; }"));
}

TEST(Parser, BrokenMethodsDoNotParse) {
  EXPECT_FALSE(is_parseable("public int f(int a) { return a; "));
  EXPECT_FALSE(is_parseable("public int f(int a) { return a }"));
  EXPECT_FALSE(is_parseable("int f() { if (x { } }"));
  EXPECT_FALSE(is_parseable(""));
  EXPECT_FALSE(is_parseable("int f() { return 1; } extra"));
}

TEST(Parser, ParseMethodNormalizesSignatureAndStripsComments) {
  const auto m = frontend_for("java").parse_method(
      "public   int\n f(int a) {\n  // note\n  int b = a; /* inline */\n  return b;\n}");
  EXPECT_EQ(m.signature, "public int f(int a)");
  EXPECT_EQ(m.body.find("note"), std::string::npos);
  EXPECT_EQ(m.body.find("inline"), std::string::npos);
  ASSERT_EQ(m.statements.size(), 2u);
  EXPECT_EQ(m.statements[0].text, "int b = a;");
  EXPECT_FALSE(m.tokens.empty());
}

TEST(Parser, FrontendRegistry) {
  const auto langs = registered_languages();
  EXPECT_NE(std::find(langs.begin(), langs.end(), "java"), langs.end());
  EXPECT_THROW(frontend_for("cobol"), lasmut::ConfigError);
}

TEST(Parser, StripIndexMarkersOnlyRemovesMarkers) {
  const auto& fe = frontend_for("java");
  EXPECT_EQ(fe.strip_index_markers("{ /*0*/a(); /* keep */ /*12*/b(); }"), "{ a(); /* keep */ b(); }");
}
