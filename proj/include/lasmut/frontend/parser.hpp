#pragma once

#include <string_view>

#include "lasmut/frontend/ast.hpp"

namespace lasmut::frontend {

// Parses a whole Java source file. Throws ParseError.
Ast parse_compilation_unit(std::string_view text);

// Parses exactly one method or constructor declaration with a body.
// The root is the method_decl / constructor_decl node.
Ast parse_method_declaration(std::string_view text);

// Parses a (possibly empty) sequence of block statements; the root is a
// synthetic block node whose children are the top-level statements.
Ast parse_statements(std::string_view text);

// Spans [start, end) of the segmented statements under `root` (a block or a
// statement), in source order. Compound-statement headers are separate spans
// from their children; blocks and empty statements produce no span.
std::vector<std::pair<std::size_t, std::size_t>> statement_spans(const Ast& ast, int root);

}  // namespace lasmut::frontend
