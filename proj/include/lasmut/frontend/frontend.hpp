#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lasmut/frontend/ast.hpp"
#include "lasmut/frontend/method.hpp"

namespace lasmut::frontend {

// A method together with where its declaration sits in the source file.
struct LocatedMethod {
  MethodRecord record;
  std::size_t decl_start = 0;  // offsets into the original file text
  std::size_t decl_end = 0;
};

struct ExtractionDiagnostic {
  std::string file;
  std::string message;
};

struct ExtractionResult {
  std::vector<MethodRecord> methods;
  std::vector<ExtractionDiagnostic> diagnostics;
};

// Language frontend. Implementations are stateless and safe to share
// between threads.
class Frontend {
 public:
  virtual ~Frontend() = default;

  virtual std::string_view language() const = 0;
  virtual std::vector<std::string> extensions() const = 0;

  // Methods and constructors with bodies, in source order. Throws ParseError.
  virtual std::vector<LocatedMethod> extract_file(const std::string& rel_path,
                                                  std::string_view source) const = 0;

  // Throws ParseError when the body does not parse.
  virtual std::vector<StatementSpan> segment_statements(std::string_view body) const = 0;

  virtual bool is_parseable(std::string_view method_text) const = 0;

  // Normalizes a standalone method declaration into a record (id and file
  // left empty). Throws ParseError.
  virtual MethodRecord parse_method(std::string_view method_text) const = 0;

  virtual std::vector<SourceToken> tokenize(std::string_view text) const = 0;

  // Whitespace- and comment-insensitive form of a statement for diffing.
  virtual std::string normalize_statement(std::string_view statement) const;

  // Syntax tree of a standalone method declaration. Throws ParseError.
  virtual Ast parse_method_ast(std::string_view method_text) const = 0;

  // Removes the statement-index markers that index_method inserts.
  virtual std::string strip_index_markers(std::string_view text) const = 0;
};

// Registry keyed by language id. "java" is registered by default.
const Frontend& frontend_for(std::string_view language);
void register_frontend(std::shared_ptr<const Frontend> frontend);
std::vector<std::string> registered_languages();

std::unique_ptr<Frontend> make_java_frontend();

// Walks project_root for source files of `language` in path order. Unreadable
// or unparseable files produce a diagnostic and are skipped.
ExtractionResult extract_methods(const std::filesystem::path& project_root,
                                 std::string_view language = "java");

std::vector<StatementSpan> segment_statements(std::string_view body,
                                              std::string_view language = "java");

bool is_parseable(std::string_view candidate_text, std::string_view language = "java");

enum class DiffKind { added, removed, modified };

std::string_view diff_kind_name(DiffKind kind);

struct StatementDiff {
  DiffKind kind = DiffKind::modified;
  std::optional<int> original;  // statement index in the original method
  std::optional<int> mutant;    // statement index in the mutant

  friend bool operator==(const StatementDiff&, const StatementDiff&) = default;
};

void to_json(nlohmann::json& j, const StatementDiff& d);
void from_json(const nlohmann::json& j, StatementDiff& d);

// Statement-level diff between the original method and a mutant method text.
// Throws ParseError when the mutant does not parse.
std::vector<StatementDiff> diff_statements(const MethodRecord& original, std::string_view mutant_text,
                                           std::string_view language = "java");

// Same, against an already normalized mutant record.
std::vector<StatementDiff> diff_statements(const MethodRecord& original, const MethodRecord& mutant,
                                           std::string_view language = "java");

}  // namespace lasmut::frontend
