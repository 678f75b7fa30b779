#include <cctype>
#include <string>

#include "lasmut/frontend/frontend.hpp"
#include "lasmut/frontend/parser.hpp"
#include "lasmut/util/error.hpp"
#include "lasmut/util/hash.hpp"

namespace lasmut::frontend {

namespace {

std::string rstrip(std::string_view s) {
  std::size_t n = s.size();
  while (n > 0 && std::isspace(static_cast<unsigned char>(s[n - 1]))) --n;
  return std::string(s.substr(0, n));
}

// Drops the trailing whitespace left behind by blanked comments, and lines
// that held nothing but a comment.
std::string tidy_body(std::string_view blanked, std::string_view original) {
  std::string out;
  std::size_t b = 0;
  std::size_t o = 0;
  bool first = true;
  while (b <= blanked.size()) {
    std::size_t be = blanked.find('\n', b);
    std::size_t oe = original.find('\n', o);
    if (be == std::string_view::npos) be = blanked.size();
    if (oe == std::string_view::npos) oe = original.size();
    const std::string line = rstrip(blanked.substr(b, be - b));
    const bool was_comment_only = line.empty() && !rstrip(original.substr(o, oe - o)).empty();
    if (!was_comment_only) {
      if (!first) out.push_back('\n');
      out += line;
      first = false;
    }
    if (be == blanked.size()) break;
    b = be + 1;
    o = oe + 1;
  }
  return out;
}

// Token texts joined with one space wherever the source had any gap.
std::string join_tokens(const Ast& ast, int first, int last) {
  std::string out;
  for (int i = first; i <= last; ++i) {
    const auto& t = ast.tokens[static_cast<std::size_t>(i)];
    if (i > first && ast.tokens[static_cast<std::size_t>(i - 1)].end != t.start) out.push_back(' ');
    out += t.text;
  }
  return out;
}

class JavaFrontend final : public Frontend {
 public:
  std::string_view language() const override { return "java"; }
  std::vector<std::string> extensions() const override { return {".java"}; }

  std::vector<LocatedMethod> extract_file(const std::string& rel_path,
                                          std::string_view source) const override {
    const std::string blanked = blank_comments(source);
    const Ast ast = parse_compilation_unit(blanked);
    std::string package;
    std::vector<LocatedMethod> out;
    for (int child : ast.node(ast.root).children) {
      const Node& n = ast.node(child);
      if (n.kind == NodeKind::package_decl) {
        int first = n.first;
        while (ast.tokens[static_cast<std::size_t>(first)].text != "package") ++first;
        package = join_tokens(ast, first + 1, n.last - 1);
        std::erase_if(package, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
      }
    }
    for (int child : ast.node(ast.root).children) {
      visit_type(ast, child, package, rel_path, source, blanked, out);
    }
    return out;
  }

  std::vector<StatementSpan> segment_statements(std::string_view body) const override {
    const Ast ast = parse_statements(body);
    std::vector<StatementSpan> out;
    int index = 0;
    for (const auto& [start, end] : statement_spans(ast, ast.root)) {
      out.push_back(StatementSpan{index++, start, end, std::string(body.substr(start, end - start))});
    }
    return out;
  }

  bool is_parseable(std::string_view method_text) const override {
    try {
      (void)parse_method_declaration(method_text);
      return true;
    } catch (const ParseError&) {
      return false;
    }
  }

  MethodRecord parse_method(std::string_view method_text) const override {
    const std::string blanked = blank_comments(method_text);
    const Ast ast = parse_method_declaration(blanked);
    return build_record(ast, ast.root, method_text, blanked);
  }

  std::vector<SourceToken> tokenize(std::string_view text) const override {
    return lex_java(text).tokens;
  }

  Ast parse_method_ast(std::string_view method_text) const override {
    return parse_method_declaration(method_text);
  }

  std::string strip_index_markers(std::string_view text) const override {
    const LexResult lexed = lex_java(text);
    std::string out;
    std::size_t pos = 0;
    for (const auto& c : lexed.comments) {
      const std::string_view body = text.substr(c.start, c.end - c.start);
      if (!is_marker(body)) continue;
      out.append(text.substr(pos, c.start - pos));
      pos = c.end;
    }
    out.append(text.substr(pos));
    return out;
  }

 private:
  static bool is_marker(std::string_view comment) {
    if (comment.size() < 5 || !comment.starts_with("/*") || !comment.ends_with("*/")) return false;
    for (std::size_t i = 2; i + 2 < comment.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(comment[i]))) return false;
    }
    return true;
  }

  MethodRecord build_record(const Ast& ast, int decl, std::string_view original,
                            std::string_view blanked) const {
    const Node& n = ast.node(decl);
    const int body_id = n.children.back();
    const Node& body_node = ast.node(body_id);
    MethodRecord rec;
    rec.signature = join_tokens(ast, n.first, body_node.first - 1);
    const std::size_t b0 = ast.begin_offset(body_id);
    const std::size_t b1 = ast.end_offset(body_id);
    rec.body = tidy_body(blanked.substr(b0, b1 - b0), original.substr(b0, b1 - b0));
    rec.statements = segment_statements(rec.body);
    rec.tokens = tokenize(rec.body);
    return rec;
  }

  void visit_type(const Ast& ast, int id, const std::string& prefix, const std::string& rel_path,
                  std::string_view source, std::string_view blanked,
                  std::vector<LocatedMethod>& out) const {
    const Node& n = ast.node(id);
    const bool is_type = n.kind == NodeKind::class_decl || n.kind == NodeKind::interface_decl ||
                         n.kind == NodeKind::enum_decl || n.kind == NodeKind::record_decl;
    if (!is_type) return;
    const std::string& name = ast.tokens[static_cast<std::size_t>(n.token)].text;
    const std::string qualified = prefix.empty() ? name : prefix + "." + name;
    const Node& body = ast.node(n.children.back());
    for (int member : body.children) {
      const Node& m = ast.node(member);
      if (m.kind == NodeKind::method_decl || m.kind == NodeKind::constructor_decl) {
        if (m.children.empty() || ast.node(m.children.back()).kind != NodeKind::block) continue;
        LocatedMethod lm;
        lm.record = build_record(ast, member, source, blanked);
        const std::string& method_name = ast.tokens[static_cast<std::size_t>(m.token)].text;
        lm.record.file = rel_path;
        lm.record.id = rel_path + "::" + qualified + "." + method_name + "#" +
                       util::short_hash(lm.record.signature, 8);
        lm.decl_start = ast.begin_offset(member);
        lm.decl_end = ast.end_offset(member);
        out.push_back(std::move(lm));
      } else {
        visit_type(ast, member, qualified, rel_path, source, blanked, out);
      }
    }
  }
};

}  // namespace

std::unique_ptr<Frontend> make_java_frontend() { return std::make_unique<JavaFrontend>(); }

}  // namespace lasmut::frontend
