#include <algorithm>
#include <array>
#include <cctype>

#include "lasmut/frontend/token.hpp"
#include "lasmut/util/error.hpp"

namespace lasmut::frontend {

namespace {

constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract", "assert",     "boolean",   "break",      "byte",      "case",
    "catch",    "char",       "class",     "const",      "continue",  "default",
    "do",       "double",     "else",      "enum",       "extends",   "final",
    "finally",  "float",      "for",       "goto",       "if",        "implements",
    "import",   "instanceof", "int",       "interface",  "long",      "native",
    "new",      "package",    "private",   "protected",  "public",    "return",
    "short",    "static",     "strictfp",  "super",      "switch",    "synchronized",
    "this",     "throw",      "throws",    "transient",  "try",       "void",
    "volatile", "while",      "_"};

// Longest first; '>' is always lexed alone and recombined by the parser so
// that nested generic closers need no splitting.
constexpr std::array<std::string_view, 35> kOperators = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=",
    "-=",  "*=",  "/=", "&=", "|=", "^=", "%=", "<<", "=",  "<",  ">",  "!",
    "~",   "?",   ":",  "+",  "-",  "*",  "/",  "&",  "|",  "^",  "%"};

constexpr std::string_view kPunctuation = "(){}[];,.@";

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  LexResult run() {
    LexResult out;
    while (true) {
      skip_space();
      if (i_ >= s_.size()) break;
      const std::size_t start = i_;
      const unsigned char c = static_cast<unsigned char>(s_[i_]);
      if (c == '/' && peek(1) == '/') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
        out.comments.push_back({start, i_});
      } else if (c == '/' && peek(1) == '*') {
        const auto close = s_.find("*/", i_ + 2);
        if (close == std::string_view::npos) throw ParseError("unterminated comment", start);
        i_ = close + 2;
        out.comments.push_back({start, i_});
      } else if (ident_start(c)) {
        while (i_ < s_.size() && ident_part(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::string_view word = s_.substr(start, i_ - start);
        TokenKind kind = TokenKind::identifier;
        if (word == "true" || word == "false" || word == "null") {
          kind = TokenKind::literal;
        } else if (is_java_keyword(word)) {
          kind = TokenKind::keyword;
        }
        push(out, start, kind);
      } else if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        number();
        push(out, start, TokenKind::literal);
      } else if (c == '"') {
        if (peek(1) == '"' && peek(2) == '"') {
          text_block(start);
        } else {
          quoted('"', start);
        }
        push(out, start, TokenKind::literal);
      } else if (c == '\'') {
        quoted('\'', start);
        push(out, start, TokenKind::literal);
      } else if (kPunctuation.find(static_cast<char>(c)) != std::string_view::npos &&
                 !(c == '.' && peek(1) == '.' && peek(2) == '.')) {
        ++i_;
        push(out, start, TokenKind::punctuation);
      } else {
        bool matched = false;
        for (std::string_view op : kOperators) {
          if (s_.substr(i_, op.size()) == op) {
            i_ += op.size();
            matched = true;
            break;
          }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
        push(out, start, TokenKind::op);
      }
    }
    return out;
  }

 private:
  char peek(std::size_t k) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  void push(LexResult& out, std::size_t start, TokenKind kind) {
    out.tokens.push_back(SourceToken{std::string(s_.substr(start, i_ - start)), start, i_, kind});
  }

  void number() {
    auto digits = [&](auto pred) {
      while (i_ < s_.size() && (pred(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    };
    auto is_dec = [](unsigned char ch) { return std::isdigit(ch) != 0; };
    if (s_[i_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      i_ += 2;
      digits([](unsigned char ch) { return std::isxdigit(ch) != 0; });
      if (i_ < s_.size() && s_[i_] == '.') {
        ++i_;
        digits([](unsigned char ch) { return std::isxdigit(ch) != 0; });
      }
      if (i_ < s_.size() && (s_[i_] == 'p' || s_[i_] == 'P')) exponent();
    } else if (s_[i_] == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      i_ += 2;
      digits([](unsigned char ch) { return ch == '0' || ch == '1'; });
    } else {
      digits(is_dec);
      if (i_ < s_.size() && s_[i_] == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        ++i_;
        digits(is_dec);
      } else if (i_ < s_.size() && s_[i_] == '.' && !ident_start(static_cast<unsigned char>(peek(1))) &&
                 peek(1) != '.') {
        ++i_;  // "1." is a double literal
      }
      if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) exponent();
    }
    if (i_ < s_.size() && std::string_view("lLfFdD").find(s_[i_]) != std::string_view::npos) ++i_;
    if (i_ < s_.size() && ident_part(static_cast<unsigned char>(s_[i_]))) {
      throw ParseError("malformed numeric literal", i_);
    }
  }

  void exponent() {
    ++i_;
    if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
    const std::size_t before = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (i_ == before) throw ParseError("malformed exponent", i_);
  }

  void quoted(char quote, std::size_t start) {
    ++i_;
    while (i_ < s_.size() && s_[i_] != quote) {
      if (s_[i_] == '\n') throw ParseError("unterminated literal", start);
      if (s_[i_] == '\\') ++i_;
      ++i_;
    }
    if (i_ >= s_.size()) throw ParseError("unterminated literal", start);
    ++i_;
  }

  void text_block(std::size_t start) {
    i_ += 3;
    while (i_ < s_.size()) {
      if (s_[i_] == '\\') {
        i_ += 2;
        continue;
      }
      if (s_.substr(i_, 3) == "\"\"\"") {
        i_ += 3;
        return;
      }
      ++i_;
    }
    throw ParseError("unterminated text block", start);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::identifier:
      return "identifier";
    case TokenKind::keyword:
      return "keyword";
    case TokenKind::literal:
      return "literal";
    case TokenKind::op:
      return "operator";
    case TokenKind::punctuation:
      return "punctuation";
  }
  return "punctuation";
}

TokenKind token_kind_from_name(std::string_view name) {
  if (name == "identifier") return TokenKind::identifier;
  if (name == "keyword") return TokenKind::keyword;
  if (name == "literal") return TokenKind::literal;
  if (name == "operator") return TokenKind::op;
  if (name == "punctuation") return TokenKind::punctuation;
  throw Error("unknown token kind: " + std::string(name));
}

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

LexResult lex_java(std::string_view text) { return Lexer(text).run(); }

std::string blank_comments(std::string_view text) {
  const LexResult lexed = lex_java(text);
  std::string out(text);
  for (const auto& c : lexed.comments) {
    for (std::size_t i = c.start; i < c.end; ++i) {
      if (out[i] != '\n' && out[i] != '\r') out[i] = ' ';
    }
  }
  return out;
}

}  // namespace lasmut::frontend
