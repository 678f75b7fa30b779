#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lasmut/frontend/token.hpp"

namespace lasmut::frontend {

struct StatementSpan {
  int index = 0;
  std::size_t start = 0;  // offsets into MethodRecord::body
  std::size_t end = 0;
  std::string text;

  friend bool operator==(const StatementSpan&, const StatementSpan&) = default;
};

// One extracted method or constructor. `body` is the brace-delimited block
// with comments removed; statement and token offsets are relative to it.
struct MethodRecord {
  std::string id;
  std::string file;
  std::string signature;
  std::string body;
  std::vector<StatementSpan> statements;
  std::vector<SourceToken> tokens;

  // The text the attention model sees: signature, one space, body.
  std::string text() const { return signature + " " + body; }
  std::size_t body_offset() const { return signature.size() + 1; }

  friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

void to_json(nlohmann::json& j, const StatementSpan& s);
void from_json(const nlohmann::json& j, StatementSpan& s);
void to_json(nlohmann::json& j, const SourceToken& t);
void from_json(const nlohmann::json& j, SourceToken& t);
void to_json(nlohmann::json& j, const MethodRecord& m);
void from_json(const nlohmann::json& j, MethodRecord& m);

}  // namespace lasmut::frontend
