#include "lasmut/frontend/method.hpp"

namespace lasmut::frontend {

using nlohmann::json;

void to_json(json& j, const StatementSpan& s) {
  j = json{{"index", s.index}, {"start", s.start}, {"end", s.end}, {"text", s.text}};
}

void from_json(const json& j, StatementSpan& s) {
  j.at("index").get_to(s.index);
  j.at("start").get_to(s.start);
  j.at("end").get_to(s.end);
  j.at("text").get_to(s.text);
}

void to_json(json& j, const SourceToken& t) {
  j = json{{"text", t.text}, {"start", t.start}, {"end", t.end}, {"kind", token_kind_name(t.kind)}};
}

void from_json(const json& j, SourceToken& t) {
  j.at("text").get_to(t.text);
  j.at("start").get_to(t.start);
  j.at("end").get_to(t.end);
  t.kind = token_kind_from_name(j.at("kind").get<std::string>());
}

void to_json(json& j, const MethodRecord& m) {
  j = json{{"id", m.id},
           {"file", m.file},
           {"signature", m.signature},
           {"body", m.body},
           {"statements", m.statements},
           {"tokens", m.tokens}};
}

void from_json(const json& j, MethodRecord& m) {
  j.at("id").get_to(m.id);
  j.at("file").get_to(m.file);
  j.at("signature").get_to(m.signature);
  j.at("body").get_to(m.body);
  j.at("statements").get_to(m.statements);
  j.at("tokens").get_to(m.tokens);
}

}  // namespace lasmut::frontend
