#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lasmut/frontend/token.hpp"

namespace lasmut::frontend {

#define LASMUT_NODE_KINDS(X) \
  X(compilation_unit)        \
  X(package_decl)            \
  X(import_decl)             \
  X(class_decl)              \
  X(interface_decl)          \
  X(enum_decl)               \
  X(record_decl)             \
  X(annotation_type_decl)    \
  X(class_body)              \
  X(enum_constant)           \
  X(field_decl)              \
  X(method_decl)             \
  X(constructor_decl)        \
  X(initializer)             \
  X(modifiers)               \
  X(annotation)              \
  X(type_params)             \
  X(type)                    \
  X(type_args)               \
  X(params)                  \
  X(param)                   \
  X(throws)                  \
  X(block)                   \
  X(local_var_decl)          \
  X(var_declarator)          \
  X(local_type_decl)         \
  X(if_stmt)                 \
  X(for_stmt)                \
  X(foreach_stmt)            \
  X(while_stmt)              \
  X(do_stmt)                 \
  X(try_stmt)                \
  X(resources)               \
  X(catch_clause)            \
  X(finally_clause)          \
  X(switch_stmt)             \
  X(switch_group)            \
  X(switch_label)            \
  X(switch_rule)             \
  X(return_stmt)             \
  X(throw_stmt)              \
  X(break_stmt)              \
  X(continue_stmt)           \
  X(yield_stmt)              \
  X(synchronized_stmt)       \
  X(labeled_stmt)            \
  X(empty_stmt)              \
  X(expr_stmt)               \
  X(assert_stmt)             \
  X(assignment)              \
  X(conditional)             \
  X(binary)                  \
  X(instanceof_expr)         \
  X(unary)                   \
  X(prefix_update)           \
  X(postfix_update)          \
  X(cast)                    \
  X(lambda)                  \
  X(lambda_params)           \
  X(method_ref)              \
  X(call)                    \
  X(arguments)               \
  X(field_access)            \
  X(array_access)            \
  X(object_creation)         \
  X(array_creation)          \
  X(array_init)              \
  X(paren)                   \
  X(name)                    \
  X(literal)                 \
  X(this_expr)               \
  X(super_expr)              \
  X(class_literal)           \
  X(switch_expr)

enum class NodeKind : std::uint8_t {
#define LASMUT_ENUM(name) name,
  LASMUT_NODE_KINDS(LASMUT_ENUM)
#undef LASMUT_ENUM
};

std::string_view node_kind_name(NodeKind kind);

inline constexpr int kNoNode = -1;

// A node covers tokens [first, last] (inclusive). `token` is the operator or
// leaf token that distinguishes the node (name, literal, binary operator, the
// declared identifier of a declaration), or -1.
struct Node {
  NodeKind kind{};
  int first = 0;
  int last = -1;
  int token = -1;
  std::vector<int> children;
};

// Arena-allocated syntax tree over a token vector.
struct Ast {
  std::vector<SourceToken> tokens;
  std::vector<Node> nodes;
  int root = kNoNode;

  const Node& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
  std::size_t begin_offset(int id) const { return tokens[static_cast<std::size_t>(node(id).first)].start; }
  std::size_t end_offset(int id) const { return tokens[static_cast<std::size_t>(node(id).last)].end; }
};

}  // namespace lasmut::frontend
