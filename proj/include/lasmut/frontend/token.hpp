#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lasmut::frontend {

enum class TokenKind { identifier, keyword, literal, op, punctuation };

std::string_view token_kind_name(TokenKind kind);
TokenKind token_kind_from_name(std::string_view name);

// A lexical token with half-open character offsets [start, end).
struct SourceToken {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  TokenKind kind = TokenKind::punctuation;

  bool is(std::string_view s) const { return text == s; }
  friend bool operator==(const SourceToken&, const SourceToken&) = default;
};

struct CommentSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct LexResult {
  std::vector<SourceToken> tokens;
  std::vector<CommentSpan> comments;
};

// Tokenizes Java source. Throws ParseError on unterminated literals/comments
// or characters outside the language.
LexResult lex_java(std::string_view text);

bool is_java_keyword(std::string_view word);

// Replaces every comment character with a space, keeping newlines, so offsets
// into the result equal offsets into the input.
std::string blank_comments(std::string_view text);

}  // namespace lasmut::frontend
