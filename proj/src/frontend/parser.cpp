#include "lasmut/frontend/parser.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "lasmut/util/error.hpp"

namespace lasmut::frontend {

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
#define LASMUT_NAME(name) \
  case NodeKind::name:    \
    return #name;
    LASMUT_NODE_KINDS(LASMUT_NAME)
#undef LASMUT_NAME
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, 8> kPrimitives = {"boolean", "byte", "char", "short",
                                                         "int",     "long", "float", "double"};

constexpr std::array<std::string_view, 12> kModifierWords = {
    "public", "private",      "protected", "static",   "final",    "abstract",
    "native", "synchronized", "transient", "volatile", "strictfp", "default"};

bool is_primitive(std::string_view s) {
  return std::find(kPrimitives.begin(), kPrimitives.end(), s) != kPrimitives.end();
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {
    ast_.tokens = lex_java(text).tokens;
  }

  Ast finish(int root) {
    ast_.root = root;
    return std::move(ast_);
  }

  // ---- entry points -------------------------------------------------------

  int compilation_unit() {
    const int unit = open(NodeKind::compilation_unit);
    if (at_annotation_then("package") || at("package")) {
      const int pkg = open(NodeKind::package_decl);
      while (at("@")) add(pkg, annotation());
      expect("package");
      qualified_name();
      expect(";");
      close(pkg);
      add(unit, pkg);
    }
    while (at("import")) {
      const int imp = open(NodeKind::import_decl);
      advance();
      accept("static");
      qualified_name();
      if (accept(".")) expect("*");
      expect(";");
      close(imp);
      add(unit, imp);
    }
    while (!eof()) {
      if (accept(";")) continue;
      const int mods = modifiers();
      add(unit, type_declaration(mods));
    }
    close(unit);
    return unit;
  }

  int method_declaration_only() {
    const int mods = modifiers();
    const int member = member_after_modifiers(mods, "");
    const NodeKind kind = ast_.node(member).kind;
    if (kind != NodeKind::method_decl && kind != NodeKind::constructor_decl) {
      fail("expected a method or constructor declaration");
    }
    if (ast_.node(member).children.empty() ||
        ast_.node(ast_.node(member).children.back()).kind != NodeKind::block) {
      fail("method declaration has no body");
    }
    if (!eof()) fail("trailing tokens after method declaration");
    return member;
  }

  int statements_only() {
    const int blk = open(NodeKind::block);
    while (!eof()) add(blk, block_statement());
    close(blk);
    return blk;
  }

 private:
  // ---- token helpers ------------------------------------------------------

  bool eof(std::size_t k = 0) const { return pos_ + k >= ast_.tokens.size(); }
  const SourceToken& tok(std::size_t k = 0) const {
    static const SourceToken kEnd{"<eof>", 0, 0, TokenKind::punctuation};
    return eof(k) ? kEnd : ast_.tokens[pos_ + k];
  }
  bool at(std::string_view s, std::size_t k = 0) const { return !eof(k) && tok(k).text == s; }
  bool at_kind(TokenKind kind, std::size_t k = 0) const { return !eof(k) && tok(k).kind == kind; }
  bool at_ident(std::size_t k = 0) const { return at_kind(TokenKind::identifier, k); }
  bool adjacent(std::size_t k) const {
    return !eof(k + 1) && tok(k).end == tok(k + 1).start;
  }
  int index() const { return static_cast<int>(pos_); }

  void advance() {
    if (eof()) fail("unexpected end of input");
    ++pos_;
  }
  bool accept(std::string_view s) {
    if (at(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  int expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    return static_cast<int>(pos_++);
  }
  int expect_ident() {
    if (!at_ident()) fail("expected identifier");
    return static_cast<int>(pos_++);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const std::size_t offset = eof() ? text_.size() : tok().start;
    if (furthest_ && furthest_->offset() > offset) throw *furthest_;
    throw ParseError(msg + " near '" + (eof() ? std::string("<eof>") : tok().text) + "'", offset);
  }

  // ---- node helpers -------------------------------------------------------

  int open(NodeKind kind) {
    ast_.nodes.push_back(Node{kind, index(), index() - 1, -1, {}});
    return static_cast<int>(ast_.nodes.size() - 1);
  }
  int close(int id) {
    ast_.nodes[static_cast<std::size_t>(id)].last = index() - 1;
    return id;
  }
  void add(int parent, int child) {
    if (child != kNoNode) ast_.nodes[static_cast<std::size_t>(parent)].children.push_back(child);
  }
  void set_token(int id, int token) { ast_.nodes[static_cast<std::size_t>(id)].token = token; }
  // Wraps an existing node: the new node starts where `first_child` starts.
  int open_from(NodeKind kind, int first_child) {
    const int first = ast_.node(first_child).first;
    ast_.nodes.push_back(Node{kind, first, index() - 1, -1, {first_child}});
    return static_cast<int>(ast_.nodes.size() - 1);
  }

  struct Mark {
    std::size_t pos;
    std::size_t nodes;
  };
  Mark mark() const { return {pos_, ast_.nodes.size()}; }
  void reset(const Mark& m) {
    pos_ = m.pos;
    ast_.nodes.resize(m.nodes);
  }

  template <typename F>
  bool speculate(F&& f) {
    const Mark m = mark();
    try {
      if (f()) return true;
    } catch (const ParseError& e) {
      if (!furthest_ || e.offset() > furthest_->offset()) furthest_ = e;
    }
    reset(m);
    return false;
  }

  // ---- names, annotations, modifiers -------------------------------------

  void qualified_name() {
    expect_ident();
    while (at(".") && at_ident(1)) {
      advance();
      advance();
    }
  }

  bool at_annotation_then(std::string_view word) const {
    // '@' Name ... followed eventually by `word` at depth 0; only used for the
    // package-declaration lookahead.
    if (!at("@")) return false;
    std::size_t k = 0;
    while (at("@", k)) {
      k += 2;
      while (at(".", k)) k += 2;
      if (at("(", k)) {
        int depth = 0;
        do {
          if (at("(", k)) ++depth;
          if (at(")", k)) --depth;
          ++k;
        } while (depth > 0 && !eof(k));
      }
    }
    return at(word, k);
  }

  int annotation() {
    const int ann = open(NodeKind::annotation);
    expect("@");
    set_token(ann, index());
    qualified_name();
    if (at("(")) skip_balanced("(", ")");
    return close(ann);
  }

  void skip_balanced(std::string_view open_s, std::string_view close_s) {
    expect(open_s);
    int depth = 1;
    while (depth > 0) {
      if (eof()) fail("unbalanced '" + std::string(open_s) + "'");
      if (at(open_s)) ++depth;
      if (at(close_s)) --depth;
      advance();
    }
  }

  bool at_modifier() const {
    if (at("@") && !at("interface", 1)) return true;
    if (at_kind(TokenKind::keyword)) {
      return std::find(kModifierWords.begin(), kModifierWords.end(), tok().text) != kModifierWords.end();
    }
    if (at("sealed") && (at_ident(1) || at_kind(TokenKind::keyword, 1))) return true;
    if (at("non") && at("-", 1) && at("sealed", 2)) return true;
    return false;
  }

  int modifiers() {
    if (!at_modifier()) return kNoNode;
    const int mods = open(NodeKind::modifiers);
    while (at_modifier()) {
      if (at("@")) {
        add(mods, annotation());
      } else if (at("non")) {
        advance();
        advance();
        advance();
      } else {
        advance();
      }
    }
    return close(mods);
  }

  // ---- types ---------------------------------------------------------------

  int type_params() {
    const int tp = open(NodeKind::type_params);
    expect("<");
    int depth = 1;
    while (depth > 0) {
      if (eof()) fail("unbalanced type parameters");
      if (at("<")) ++depth;
      if (at(">")) --depth;
      advance();
    }
    return close(tp);
  }

  int type_args() {
    const int ta = open(NodeKind::type_args);
    expect("<");
    if (accept(">")) return close(ta);  // diamond
    do {
      while (at("@")) add(ta, annotation());
      if (at("?")) {
        const int wild = open(NodeKind::type);
        advance();
        if (accept("extends") || accept("super")) add(wild, type());
        add(ta, close(wild));
      } else {
        add(ta, type());
      }
    } while (accept(","));
    expect(">");
    return close(ta);
  }

  int type() {
    const int t = open(NodeKind::type);
    while (at("@")) add(t, annotation());
    if (at_kind(TokenKind::keyword) && (is_primitive(tok().text) || at("void"))) {
      set_token(t, index());
      advance();
    } else {
      set_token(t, expect_ident());
      if (at("<")) add(t, type_args());
      while (at(".") && (at_ident(1) || at("@", 1))) {
        advance();
        while (at("@")) add(t, annotation());
        expect_ident();
        if (at("<")) add(t, type_args());
      }
    }
    dims();
    return close(t);
  }

  void dims() {
    while (true) {
      const std::size_t save = pos_;
      while (at("@")) annotation();
      if (at("[") && at("]", 1)) {
        advance();
        advance();
      } else {
        pos_ = save;
        return;
      }
    }
  }

  // ---- declarations ---------------------------------------------------------

  bool at_type_decl_start() const {
    if (at("class") || at("interface") || at("enum")) return true;
    if (at("@") && at("interface", 1)) return true;
    if (at("record") && at_ident(1) && (at("(", 2) || at("<", 2))) return true;
    return false;
  }

  int type_declaration(int mods) {
    NodeKind kind = NodeKind::class_decl;
    if (at("class")) {
      kind = NodeKind::class_decl;
    } else if (at("interface")) {
      kind = NodeKind::interface_decl;
    } else if (at("enum")) {
      kind = NodeKind::enum_decl;
    } else if (at("record")) {
      kind = NodeKind::record_decl;
    } else if (at("@") && at("interface", 1)) {
      kind = NodeKind::annotation_type_decl;
    } else {
      fail("expected a type declaration");
    }
    const int decl = mods == kNoNode ? open(kind) : open_from(kind, mods);
    if (kind == NodeKind::annotation_type_decl) advance();
    advance();
    const int name_tok = expect_ident();
    set_token(decl, name_tok);
    const std::string& name = ast_.tokens[static_cast<std::size_t>(name_tok)].text;
    if (at("<")) add(decl, type_params());
    if (kind == NodeKind::record_decl) add(decl, params());
    if (accept("extends")) {
      do add(decl, type());
      while (accept(","));
    }
    if (accept("implements")) {
      do add(decl, type());
      while (accept(","));
    }
    if (accept("permits")) {
      do add(decl, type());
      while (accept(","));
    }
    if (kind == NodeKind::annotation_type_decl) {
      const int body = open(NodeKind::class_body);
      skip_balanced("{", "}");
      add(decl, close(body));
    } else if (kind == NodeKind::enum_decl) {
      add(decl, enum_body(name));
    } else {
      add(decl, class_body(name, kind == NodeKind::record_decl));
    }
    return close(decl);
  }

  int class_body(const std::string& class_name, bool is_record = false) {
    const int body = open(NodeKind::class_body);
    expect("{");
    while (!at("}")) {
      if (eof()) fail("unterminated class body");
      if (accept(";")) continue;
      add(body, member(class_name, is_record));
    }
    expect("}");
    return close(body);
  }

  int enum_body(const std::string& enum_name) {
    const int body = open(NodeKind::class_body);
    expect("{");
    while (!at(";") && !at("}")) {
      const int c = open(NodeKind::enum_constant);
      while (at("@")) add(c, annotation());
      set_token(c, expect_ident());
      if (at("(")) add(c, arguments());
      if (at("{")) add(c, class_body(""));
      add(body, close(c));
      if (!accept(",")) break;
    }
    if (accept(";")) {
      while (!at("}")) {
        if (eof()) fail("unterminated enum body");
        if (accept(";")) continue;
        add(body, member(enum_name, false));
      }
    }
    expect("}");
    return close(body);
  }

  int member(const std::string& class_name, bool is_record) {
    const int mods = modifiers();
    if (at("{")) {
      const int init = mods == kNoNode ? open(NodeKind::initializer) : open_from(NodeKind::initializer, mods);
      add(init, block());
      return close(init);
    }
    if (at_type_decl_start()) return type_declaration(mods);
    // compact canonical constructor of a record
    if (is_record && at_ident() && tok().text == class_name && at("{", 1)) {
      const int ctor = mods == kNoNode ? open(NodeKind::constructor_decl)
                                       : open_from(NodeKind::constructor_decl, mods);
      set_token(ctor, index());
      advance();
      add(ctor, block());
      return close(ctor);
    }
    return member_after_modifiers(mods, class_name);
  }

  int member_after_modifiers(int mods, const std::string& /*class_name*/) {
    int tparams = kNoNode;
    if (at("<")) tparams = type_params();
    // constructor: Identifier '('
    if (at_ident() && at("(", 1)) {
      int ctor;
      if (mods != kNoNode) {
        ctor = open_from(NodeKind::constructor_decl, mods);
      } else if (tparams != kNoNode) {
        ctor = open_from(NodeKind::constructor_decl, tparams);
      } else {
        ctor = open(NodeKind::constructor_decl);
      }
      if (mods != kNoNode && tparams != kNoNode) add(ctor, tparams);
      set_token(ctor, index());
      advance();
      add(ctor, params());
      if (at("throws")) add(ctor, throws_clause());
      add(ctor, block());
      return close(ctor);
    }
    const int ret = type();
    const int first = mods != kNoNode ? mods : (tparams != kNoNode ? tparams : ret);
    if (at_ident() && at("(", 1)) {
      const int method = open_from(NodeKind::method_decl, first);
      auto& ch = ast_.nodes[static_cast<std::size_t>(method)].children;
      ch.clear();
      if (mods != kNoNode) ch.push_back(mods);
      if (tparams != kNoNode) ch.push_back(tparams);
      ch.push_back(ret);
      set_token(method, index());
      advance();
      add(method, params());
      dims();
      if (at("throws")) add(method, throws_clause());
      if (accept("default")) {
        // annotation element default value
        element_value();
        expect(";");
      } else if (!accept(";")) {
        add(method, block());
      }
      return close(method);
    }
    if (tparams != kNoNode) fail("type parameters on a field");
    const int field = open_from(NodeKind::field_decl, first);
    auto& ch = ast_.nodes[static_cast<std::size_t>(field)].children;
    ch.clear();
    if (mods != kNoNode) ch.push_back(mods);
    ch.push_back(ret);
    do add(field, var_declarator());
    while (accept(","));
    expect(";");
    return close(field);
  }

  void element_value() {
    if (at("@")) {
      annotation();
    } else if (at("{")) {
      skip_balanced("{", "}");
    } else {
      expression();
    }
  }

  int throws_clause() {
    const int t = open(NodeKind::throws);
    expect("throws");
    do add(t, type());
    while (accept(","));
    return close(t);
  }

  int params() {
    const int ps = open(NodeKind::params);
    expect("(");
    if (!at(")")) {
      do {
        const int p = open(NodeKind::param);
        add(p, modifiers());
        add(p, type());
        accept("...");
        if (at("this")) {
          set_token(p, index());
          advance();  // receiver parameter
        } else {
          if (at_ident() && at(".", 1) && at("this", 2)) {
            advance();
            advance();
            set_token(p, index());
            advance();
          } else {
            set_token(p, expect_ident());
            dims();
          }
        }
        add(ps, close(p));
      } while (accept(","));
    }
    expect(")");
    return close(ps);
  }

  int var_declarator() {
    const int d = open(NodeKind::var_declarator);
    set_token(d, expect_ident());
    dims();
    if (accept("=")) add(d, variable_initializer());
    return close(d);
  }

  int variable_initializer() { return at("{") ? array_init() : expression(); }

  int array_init() {
    const int init = open(NodeKind::array_init);
    expect("{");
    while (!at("}")) {
      add(init, variable_initializer());
      if (!accept(",")) break;
    }
    expect("}");
    return close(init);
  }

  // ---- statements -----------------------------------------------------------

  int block() {
    const int blk = open(NodeKind::block);
    expect("{");
    while (!at("}")) {
      if (eof()) fail("unterminated block");
      add(blk, block_statement());
    }
    expect("}");
    return close(blk);
  }

  bool at_local_type_decl() const {
    std::size_t k = 0;
    while (true) {
      if (at("@", k) && !at("interface", k + 1)) {
        // skip annotation
        k += 2;
        while (at(".", k)) k += 2;
        if (at("(", k)) {
          int depth = 0;
          do {
            if (at("(", k)) ++depth;
            if (at(")", k)) --depth;
            ++k;
          } while (depth > 0 && !eof(k));
        }
        continue;
      }
      if (at("final", k) || at("abstract", k) || at("static", k) || at("strictfp", k)) {
        ++k;
        continue;
      }
      break;
    }
    if (at("class", k) || at("interface", k) || at("enum", k)) return true;
    return at("record", k) && at_ident(k + 1) && (at("(", k + 2) || at("<", k + 2));
  }

  int block_statement() {
    if (at_local_type_decl()) {
      const int decl = open(NodeKind::local_type_decl);
      const int mods = modifiers();
      add(decl, type_declaration(mods));
      return close(decl);
    }
    if (at_yield_statement()) return statement();
    int decl = kNoNode;
    if (speculate([&] {
          decl = local_var_decl(true);
          return true;
        })) {
      return decl;
    }
    return statement();
  }

  // [modifiers] Type declarator {, declarator} [;]
  int local_var_decl(bool with_semicolon) {
    const int d = open(NodeKind::local_var_decl);
    add(d, modifiers());
    const int t = type();
    if (!at_ident()) fail("not a declaration");
    // `a < b > c` style expressions never reach here as a declarator follows
    add(d, t);
    do add(d, var_declarator());
    while (accept(","));
    if (with_semicolon) expect(";");
    return close(d);
  }

  bool at_yield_statement() const {
    if (!at("yield") || !at_ident()) return false;
    if (eof(1)) return false;
    static constexpr std::array<std::string_view, 18> kNotYield = {
        "=", ".", "[", "++", "--", ";", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", "->", ":", "::"};
    return std::find(kNotYield.begin(), kNotYield.end(), tok(1).text) == kNotYield.end();
  }

  int statement() {
    if (at("{")) return block();
    if (at(";")) {
      const int e = open(NodeKind::empty_stmt);
      advance();
      return close(e);
    }
    if (at_ident() && at(":", 1)) {
      const int l = open(NodeKind::labeled_stmt);
      advance();
      set_token(l, expect(":"));
      add(l, statement());
      return close(l);
    }
    if (at_yield_statement()) {
      const int y = open(NodeKind::yield_stmt);
      advance();
      add(y, expression());
      expect(";");
      return close(y);
    }
    if (!at_kind(TokenKind::keyword)) return expression_statement();
    const std::string& kw = tok().text;
    if (kw == "if") {
      const int s = open(NodeKind::if_stmt);
      advance();
      expect("(");
      add(s, expression());
      set_token(s, expect(")"));
      add(s, statement());
      if (accept("else")) add(s, statement());
      return close(s);
    }
    if (kw == "while") {
      const int s = open(NodeKind::while_stmt);
      advance();
      expect("(");
      add(s, expression());
      set_token(s, expect(")"));
      add(s, statement());
      return close(s);
    }
    if (kw == "do") {
      const int s = open(NodeKind::do_stmt);
      advance();
      add(s, statement());
      set_token(s, expect("while"));
      expect("(");
      add(s, expression());
      expect(")");
      expect(";");
      return close(s);
    }
    if (kw == "for") return for_statement();
    if (kw == "try") return try_statement();
    if (kw == "switch") {
      // switch used as an expression statement is not valid Java, so this is
      // always the statement form.
      return switch_construct(NodeKind::switch_stmt);
    }
    if (kw == "return") {
      const int s = open(NodeKind::return_stmt);
      advance();
      if (!at(";")) add(s, expression());
      expect(";");
      return close(s);
    }
    if (kw == "throw") {
      const int s = open(NodeKind::throw_stmt);
      advance();
      add(s, expression());
      expect(";");
      return close(s);
    }
    if (kw == "break" || kw == "continue") {
      const int s = open(kw == "break" ? NodeKind::break_stmt : NodeKind::continue_stmt);
      advance();
      if (at_ident()) set_token(s, expect_ident());
      expect(";");
      return close(s);
    }
    if (kw == "synchronized") {
      const int s = open(NodeKind::synchronized_stmt);
      advance();
      expect("(");
      add(s, expression());
      set_token(s, expect(")"));
      add(s, block());
      return close(s);
    }
    if (kw == "assert") {
      const int s = open(NodeKind::assert_stmt);
      advance();
      add(s, expression());
      if (accept(":")) add(s, expression());
      expect(";");
      return close(s);
    }
    if (kw == "else" || kw == "case" || kw == "default" || kw == "catch" || kw == "finally") {
      fail("misplaced '" + kw + "'");
    }
    return expression_statement();
  }

  int expression_statement() {
    const int s = open(NodeKind::expr_stmt);
    add(s, expression());
    expect(";");
    return close(s);
  }

  int for_statement() {
    const int start = index();
    expect("for");
    expect("(");
    // enhanced for: [mods] Type Identifier ':'
    int each = kNoNode;
    const Mark m = mark();
    if (speculate([&] {
          each = open(NodeKind::foreach_stmt);
          ast_.nodes[static_cast<std::size_t>(each)].first = start;
          const int var = open(NodeKind::local_var_decl);
          add(var, modifiers());
          add(var, type());
          const int d = open(NodeKind::var_declarator);
          set_token(d, expect_ident());
          dims();
          add(var, close(d));
          add(each, close(var));
          if (!at(":")) return false;
          advance();
          add(each, expression());
          set_token(each, expect(")"));
          return true;
        })) {
      add(each, statement());
      return close(each);
    }
    reset(m);
    const int s = open(NodeKind::for_stmt);
    ast_.nodes[static_cast<std::size_t>(s)].first = start;
    if (!at(";")) {
      int decl = kNoNode;
      if (speculate([&] {
            decl = local_var_decl(false);
            return at(";");
          })) {
        add(s, decl);
      } else {
        do add(s, expression());
        while (accept(","));
      }
    }
    expect(";");
    if (!at(";")) add(s, expression());
    expect(";");
    if (!at(")")) {
      do add(s, expression());
      while (accept(","));
    }
    set_token(s, expect(")"));
    add(s, statement());
    return close(s);
  }

  int try_statement() {
    const int s = open(NodeKind::try_stmt);
    expect("try");
    if (at("(")) {
      const int res = open(NodeKind::resources);
      advance();
      while (!at(")")) {
        int decl = kNoNode;
        if (speculate([&] {
              decl = local_var_decl(false);
              return at(";") || at(")");
            })) {
          add(res, decl);
        } else {
          add(res, expression());
        }
        if (!accept(";")) break;
      }
      set_token(s, expect(")"));
      add(s, close(res));
    }
    add(s, block());
    bool handlers = false;
    while (at("catch")) {
      handlers = true;
      const int c = open(NodeKind::catch_clause);
      advance();
      expect("(");
      const int p = open(NodeKind::param);
      add(p, modifiers());
      add(p, type());
      while (accept("|")) add(p, type());
      set_token(p, expect_ident());
      add(c, close(p));
      set_token(c, expect(")"));
      add(c, block());
      add(s, close(c));
    }
    if (at("finally")) {
      handlers = true;
      const int f = open(NodeKind::finally_clause);
      set_token(f, index());
      advance();
      add(f, block());
      add(s, close(f));
    }
    if (!handlers && ast_.node(s).token < 0) fail("try without catch or finally");
    return close(s);
  }

  // switch statement or expression
  int switch_construct(NodeKind kind) {
    const int s = open(kind);
    expect("switch");
    expect("(");
    add(s, expression());
    set_token(s, expect(")"));
    expect("{");
    bool rules = false;
    bool decided = false;
    while (!at("}")) {
      if (eof()) fail("unterminated switch");
      if (!at("case") && !at("default")) fail("expected 'case' or 'default'");
      const int label = switch_label();
      const bool arrow = at("->");
      if (!decided) {
        rules = arrow;
        decided = true;
      } else if (rules != arrow) {
        fail("mixed switch labels");
      }
      if (rules) {
        const int rule = open_from(NodeKind::switch_rule, label);
        advance();  // ->
        if (at("{")) {
          add(rule, block());
        } else if (at("throw")) {
          add(rule, statement());
        } else {
          add(rule, expression_statement());
        }
        add(s, close(rule));
      } else {
        const int group = open_from(NodeKind::switch_group, label);
        advance();  // :
        ast_.nodes[static_cast<std::size_t>(label)].last = index() - 1;
        while (!at("case") && !at("default") && !at("}")) {
          if (eof()) fail("unterminated switch group");
          add(group, block_statement());
        }
        add(s, close(group));
      }
    }
    expect("}");
    return close(s);
  }

  int switch_label() {
    const int label = open(NodeKind::switch_label);
    if (accept("default")) {
      close(label);
      return label;
    }
    expect("case");
    do {
      if (at("default")) {
        advance();
        continue;
      }
      int pattern = kNoNode;
      if (speculate([&] {
            pattern = open(NodeKind::param);
            add(pattern, modifiers());
            add(pattern, type());
            set_token(pattern, expect_ident());
            close(pattern);
            return at("->") || at(":") || at(",") || at("when");
          })) {
        add(label, pattern);
        if (accept("when")) add(label, expression());
      } else {
        add(label, ternary());
      }
    } while (accept(","));
    if (!at("->") && !at(":")) fail("expected ':' or '->' after case label");
    return close(label);
  }

  // ---- expressions ----------------------------------------------------------

  bool at_lambda() const {
    if (at_ident() && at("->", 1)) return true;
    if (!at("(")) return false;
    int depth = 0;
    std::size_t k = 0;
    do {
      if (eof(k)) return false;
      if (at("(", k)) ++depth;
      if (at(")", k)) --depth;
      ++k;
    } while (depth > 0);
    return at("->", k);
  }

  int lambda() {
    const int l = open(NodeKind::lambda);
    const int ps = open(NodeKind::lambda_params);
    if (at_ident()) {
      const int p = open(NodeKind::param);
      set_token(p, expect_ident());
      add(ps, close(p));
    } else {
      expect("(");
      if (!at(")")) {
        do {
          const int p = open(NodeKind::param);
          if (at_ident() && (at(",", 1) || at(")", 1))) {
            set_token(p, expect_ident());
          } else {
            add(p, modifiers());
            add(p, type());
            accept("...");
            set_token(p, expect_ident());
            dims();
          }
          add(ps, close(p));
        } while (accept(","));
      }
      expect(")");
    }
    add(l, close(ps));
    set_token(l, expect("->"));
    add(l, at("{") ? block() : expression());
    return close(l);
  }

  // Assignment operator at the cursor, combining split '>' tokens. Returns the
  // number of tokens it spans, or 0.
  std::size_t assignment_op_width() const {
    static constexpr std::array<std::string_view, 11> kSimple = {
        "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", "="};
    if (eof()) return 0;
    if (std::find(kSimple.begin(), kSimple.end(), tok().text) != kSimple.end()) return 1;
    if (at(">") && adjacent(0) && at(">", 1)) {
      if (adjacent(1) && at("=", 2)) return 3;                                    // >>=
      if (adjacent(1) && at(">", 2) && adjacent(2) && at("=", 3)) return 4;       // >>>=
    }
    return 0;
  }

  int expression() {
    if (at_lambda()) return lambda();
    const int lhs = ternary();
    if (const std::size_t w = assignment_op_width()) {
      const int a = open_from(NodeKind::assignment, lhs);
      set_token(a, index());
      pos_ += w;
      add(a, expression());
      return close(a);
    }
    return lhs;
  }

  int ternary() {
    const int cond = binary(0);
    if (at("?")) {
      const int t = open_from(NodeKind::conditional, cond);
      advance();
      add(t, expression());
      expect(":");
      add(t, at_lambda() ? lambda() : ternary());
      return close(t);
    }
    return cond;
  }

  // Binary operator at the cursor and its precedence level; width in tokens.
  struct BinOp {
    int level = -1;
    std::size_t width = 0;
  };

  BinOp binary_op() const {
    if (eof()) return {};
    const std::string& t = tok().text;
    if (t == ">") {
      if (adjacent(0) && at(">", 1)) {
        if (adjacent(1) && at(">", 2)) {
          if (adjacent(2) && at("=", 3)) return {};  // >>>=
          return {7, 3};
        }
        if (adjacent(1) && at("=", 2)) return {};  // >>=
        return {7, 2};
      }
      if (adjacent(0) && at("=", 1)) return {6, 2};  // >=
      return {6, 1};
    }
    if (t == "||") return {0, 1};
    if (t == "&&") return {1, 1};
    if (t == "|") return {2, 1};
    if (t == "^") return {3, 1};
    if (t == "&") return {4, 1};
    if (t == "==" || t == "!=") return {5, 1};
    if (t == "<" || t == "<=" || t == "instanceof") return {6, 1};
    if (t == "<<") return {7, 1};
    if (t == "+" || t == "-") return {8, 1};
    if (t == "*" || t == "/" || t == "%") return {9, 1};
    return {};
  }

  int binary(int min_level) {
    int lhs = unary();
    while (true) {
      const BinOp op = binary_op();
      if (op.level < min_level || op.width == 0) break;
      if (at("instanceof")) {
        const int io = open_from(NodeKind::instanceof_expr, lhs);
        set_token(io, index());
        advance();
        accept("final");
        add(io, type());
        if (at_ident() && !at("when")) {
          const int p = open(NodeKind::param);
          set_token(p, expect_ident());
          add(io, close(p));
        }
        lhs = close(io);
        continue;
      }
      const int b = open_from(NodeKind::binary, lhs);
      set_token(b, index());
      pos_ += op.width;
      add(b, binary(op.level + 1));
      lhs = close(b);
    }
    return lhs;
  }

  bool at_unary_not_plus_minus_start() const {
    if (eof()) return false;
    if (at_ident() || at_kind(TokenKind::literal)) return true;
    if (at("(") || at("!") || at("~")) return true;
    if (at_kind(TokenKind::keyword)) {
      const std::string& t = tok().text;
      return t == "this" || t == "super" || t == "new" || t == "switch" || is_primitive(t) || t == "void";
    }
    return false;
  }

  int unary() {
    if (at("+") || at("-") || at("!") || at("~")) {
      const int u = open(NodeKind::unary);
      set_token(u, index());
      advance();
      add(u, unary());
      return close(u);
    }
    if (at("++") || at("--")) {
      const int u = open(NodeKind::prefix_update);
      set_token(u, index());
      advance();
      add(u, unary());
      return close(u);
    }
    if (at("(")) {
      int cast = kNoNode;
      if (speculate([&] {
            cast = open(NodeKind::cast);
            advance();
            const bool primitive = at_kind(TokenKind::keyword) && is_primitive(tok().text);
            add(cast, type());
            while (accept("&")) add(cast, type());
            expect(")");
            if (primitive) {
              add(cast, unary());
            } else {
              if (at_lambda()) {
                add(cast, lambda());
              } else {
                if (!at_unary_not_plus_minus_start()) return false;
                add(cast, unary());
              }
            }
            close(cast);
            return true;
          })) {
        return cast;
      }
    }
    return postfix(primary());
  }

  int arguments() {
    const int args = open(NodeKind::arguments);
    expect("(");
    if (!at(")")) {
      do add(args, expression());
      while (accept(","));
    }
    expect(")");
    return close(args);
  }

  int postfix(int expr) {
    while (true) {
      if (at(".")) {
        if (at("new", 1)) {
          advance();
          const int created = creator();
          const int fa = open_from(NodeKind::field_access, expr);
          add(fa, created);
          expr = close(fa);
          continue;
        }
        advance();
        if (at("<")) {
          const int targs = type_args();
          const int c = open_from(NodeKind::call, expr);
          add(c, targs);
          set_token(c, expect_ident());
          add(c, arguments());
          expr = close(c);
          continue;
        }
        if (at("this") || at("class") || at("super")) {
          const int fa = open_from(NodeKind::field_access, expr);
          set_token(fa, index());
          advance();
          expr = close(fa);
          continue;
        }
        const int name = expect_ident();
        if (at("(")) {
          const int c = open_from(NodeKind::call, expr);
          set_token(c, name);
          add(c, arguments());
          expr = close(c);
        } else {
          const int fa = open_from(NodeKind::field_access, expr);
          set_token(fa, name);
          expr = close(fa);
        }
        continue;
      }
      if (at("[")) {
        const int aa = open_from(NodeKind::array_access, expr);
        advance();
        add(aa, expression());
        expect("]");
        expr = close(aa);
        continue;
      }
      if (at("::")) {
        const int mr = open_from(NodeKind::method_ref, expr);
        advance();
        if (at("<")) add(mr, type_args());
        if (at("new")) {
          set_token(mr, index());
          advance();
        } else {
          set_token(mr, expect_ident());
        }
        expr = close(mr);
        continue;
      }
      if (at("++") || at("--")) {
        const int pu = open_from(NodeKind::postfix_update, expr);
        set_token(pu, index());
        advance();
        expr = close(pu);
        continue;
      }
      return expr;
    }
  }

  int creator() {
    const int start = index();
    expect("new");
    int targs = kNoNode;
    if (at("<")) targs = type_args();
    // element/class type without dims
    const int t = open(NodeKind::type);
    while (at("@")) add(t, annotation());
    if (at_kind(TokenKind::keyword) && is_primitive(tok().text)) {
      set_token(t, index());
      advance();
    } else {
      set_token(t, expect_ident());
      if (at("<")) add(t, type_args());
      while (at(".") && at_ident(1)) {
        advance();
        expect_ident();
        if (at("<")) add(t, type_args());
      }
    }
    close(t);
    if (at("[")) {
      const int ac = open(NodeKind::array_creation);
      ast_.nodes[static_cast<std::size_t>(ac)].first = start;
      add(ac, t);
      bool sized = false;
      while (at("[")) {
        if (at("]", 1)) {
          advance();
          advance();
        } else {
          advance();
          add(ac, expression());
          expect("]");
          sized = true;
        }
      }
      if (!sized) {
        if (!at("{")) fail("array creation needs dimensions or an initializer");
        add(ac, array_init());
      }
      return close(ac);
    }
    const int oc = open(NodeKind::object_creation);
    ast_.nodes[static_cast<std::size_t>(oc)].first = start;
    add(oc, targs);
    add(oc, t);
    add(oc, arguments());
    if (at("{")) add(oc, class_body(""));
    return close(oc);
  }

  int primary() {
    if (eof()) fail("expected expression");
    if (at_kind(TokenKind::literal)) {
      const int l = open(NodeKind::literal);
      set_token(l, index());
      advance();
      return close(l);
    }
    if (at("(")) {
      const int p = open(NodeKind::paren);
      advance();
      add(p, expression());
      expect(")");
      return close(p);
    }
    if (at("this")) {
      const int t = open(NodeKind::this_expr);
      set_token(t, index());
      advance();
      if (at("(")) {
        const int c = open_from(NodeKind::call, t);
        set_token(c, ast_.node(t).token);
        add(c, arguments());
        return close(c);
      }
      return close(t);
    }
    if (at("super")) {
      const int s = open(NodeKind::super_expr);
      set_token(s, index());
      advance();
      if (at("(")) {
        const int c = open_from(NodeKind::call, s);
        set_token(c, ast_.node(s).token);
        add(c, arguments());
        return close(c);
      }
      return close(s);
    }
    if (at("new")) return creator();
    if (at("switch")) return switch_construct(NodeKind::switch_expr);
    if (at_kind(TokenKind::keyword) && (is_primitive(tok().text) || at("void"))) {
      // int.class, int[].class, int[]::new
      const int t = type();
      if (at(".") && at("class", 1)) {
        const int cl = open_from(NodeKind::class_literal, t);
        advance();
        advance();
        return close(cl);
      }
      if (at("::")) return t;
      fail("unexpected type in expression");
    }
    if (at("<")) {
      // generic constructor/method invocation prefix is not supported
      fail("unexpected '<'");
    }
    if (at_ident()) {
      // Type-shaped prefix for class literals and method references:
      // Foo[].class, List<String>::new, Foo.Bar[]::new
      if (at("[", 1) && at("]", 2)) {
        const int t = type();
        if (at(".") && at("class", 1)) {
          const int cl = open_from(NodeKind::class_literal, t);
          advance();
          advance();
          return close(cl);
        }
        if (at("::")) return t;
        fail("expected '.class' or '::' after array type");
      }
      if (at("<", 1)) {
        int t = kNoNode;
        if (speculate([&] {
              t = type();
              return at("::");
            })) {
          return t;
        }
      }
      const int n = open(NodeKind::name);
      set_token(n, index());
      advance();
      close(n);
      if (at("(")) {
        const int c = open_from(NodeKind::call, n);
        set_token(c, ast_.node(n).token);
        add(c, arguments());
        return close(c);
      }
      return n;
    }
    fail("expected expression");
  }

  std::string_view text_;
  Ast ast_;
  std::size_t pos_ = 0;
  std::optional<ParseError> furthest_;  // deepest failure inside a speculation
};

// ---- statement segmentation --------------------------------------------------

using Spans = std::vector<std::pair<std::size_t, std::size_t>>;

void push_span(const Ast& ast, Spans& out, int first_tok, int last_tok) {
  if (last_tok < first_tok) return;
  out.emplace_back(ast.tokens[static_cast<std::size_t>(first_tok)].start,
                   ast.tokens[static_cast<std::size_t>(last_tok)].end);
}

void segment(const Ast& ast, int id, Spans& out) {
  if (id == kNoNode) return;
  const Node& n = ast.node(id);
  switch (n.kind) {
    case NodeKind::block:
      for (int c : n.children) segment(ast, c, out);
      return;
    case NodeKind::empty_stmt:
      return;
    case NodeKind::if_stmt:
      push_span(ast, out, n.first, n.token);
      for (std::size_t i = 1; i < n.children.size(); ++i) segment(ast, n.children[i], out);
      return;
    case NodeKind::for_stmt:
    case NodeKind::foreach_stmt:
    case NodeKind::while_stmt:
    case NodeKind::synchronized_stmt:
      push_span(ast, out, n.first, n.token);
      segment(ast, n.children.back(), out);
      return;
    case NodeKind::do_stmt:
      segment(ast, n.children.front(), out);
      push_span(ast, out, n.token, n.last);
      return;
    case NodeKind::labeled_stmt:
      push_span(ast, out, n.first, n.token);
      segment(ast, n.children.front(), out);
      return;
    case NodeKind::try_stmt:
      if (n.token >= 0) push_span(ast, out, n.first, n.token);
      for (int c : n.children) {
        if (ast.node(c).kind != NodeKind::resources) segment(ast, c, out);
      }
      return;
    case NodeKind::catch_clause:
      push_span(ast, out, n.first, n.token);
      segment(ast, n.children.back(), out);
      return;
    case NodeKind::finally_clause:
      segment(ast, n.children.back(), out);
      return;
    case NodeKind::switch_stmt:
      push_span(ast, out, n.first, n.token);
      for (std::size_t i = 1; i < n.children.size(); ++i) segment(ast, n.children[i], out);
      return;
    case NodeKind::switch_group:
      for (int c : n.children) segment(ast, c, out);
      return;
    case NodeKind::switch_label:
      push_span(ast, out, n.first, n.last);
      return;
    case NodeKind::switch_rule: {
      const Node& label = ast.node(n.children.front());
      // label through the arrow
      push_span(ast, out, label.first, label.last + 1);
      segment(ast, n.children.back(), out);
      return;
    }
    default:
      push_span(ast, out, n.first, n.last);
      return;
  }
}

}  // namespace

Ast parse_compilation_unit(std::string_view text) {
  Parser p(text);
  const int root = p.compilation_unit();
  return p.finish(root);
}

Ast parse_method_declaration(std::string_view text) {
  Parser p(text);
  const int root = p.method_declaration_only();
  return p.finish(root);
}

Ast parse_statements(std::string_view text) {
  Parser p(text);
  const int root = p.statements_only();
  return p.finish(root);
}

Spans statement_spans(const Ast& ast, int root) {
  Spans out;
  segment(ast, root, out);
  return out;
}

}  // namespace lasmut::frontend
