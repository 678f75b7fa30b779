#include "lasmut/generator/prompt.hpp"

#include <filesystem>

#include "lasmut/util/jsonl.hpp"
#include "lasmut/util/subprocess.hpp"

namespace lasmut::generator {

using nlohmann::json;

namespace {

constexpr const char* kLasV1 =
    "You are given a {language} method whose statements are numbered with /*i*/ comments.\n"
    "Inject {n} different bugs into this method. Each bug must be a complete, syntactically valid "
    "version of the whole method, returned in its own ```{language} fenced code block, with no other "
    "code blocks in the answer. Do not add comments or explanations inside the code.\n"
    "\n"
    "Change only the statements at locations {locations}. Do not modify any other statement or the "
    "method signature. You may keep or drop the /*i*/ markers.\n"
    "\n"
    "```{language}\n"
    "{method}\n"
    "```\n";

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

PromptTooLarge::PromptTooLarge(std::size_t estimate, std::size_t budget)
    : Error("prompt needs about " + std::to_string(estimate) + " tokens, over the budget of " +
            std::to_string(budget)),
      estimate_(estimate) {}

std::string index_method(const frontend::MethodRecord& method) {
  if (method.statements.empty()) throw Error("method " + method.id + " has no statements to index");
  std::string body;
  std::size_t pos = 0;
  for (const auto& s : method.statements) {
    body.append(method.body, pos, s.start - pos);
    body += "/*" + std::to_string(s.index) + "*/";
    pos = s.start;
  }
  body.append(method.body, pos);
  return method.signature + " " + body;
}

PromptTemplate load_template(const std::string& id_or_path) {
  PromptTemplate t;
  if (id_or_path == "las-v1") {
    t = {"las-v1", kLasV1};
  } else if (id_or_path.rfind("file:", 0) == 0) {
    const std::filesystem::path p = id_or_path.substr(5);
    t = {p.stem().string(), util::read_file(p)};
  } else {
    throw ConfigError("unknown prompt template '" + id_or_path + "'");
  }
  for (const char* slot : {"{method}", "{locations}"}) {
    if (t.text.find(slot) == std::string::npos) {
      throw ConfigError("prompt template " + t.id + " lacks the " + slot + " placeholder");
    }
  }
  return t;
}

std::size_t estimate_tokens(const std::string& text) { return (text.size() + 3) / 4; }

PromptSpec build_prompt(const frontend::MethodRecord& method, const std::vector<int>& las, int n,
                        const PromptTemplate& tmpl, std::size_t context_budget, const std::string& language) {
  if (las.empty()) throw Error("cannot build a prompt without target statements");
  if (n < 1) throw Error("number of bugs must be at least 1");
  for (int i : las) {
    if (i < 0 || static_cast<std::size_t>(i) >= method.statements.size()) {
      throw Error("LAS index " + std::to_string(i) + " is not a statement of " + method.id);
    }
  }
  PromptSpec p;
  p.template_id = tmpl.id;
  p.method_id = method.id;
  p.n_bugs = n;
  p.las_indices = las;
  p.indexed_method = index_method(method);
  std::string r = tmpl.text;
  r = util::substitute(r, "n", std::to_string(n));
  r = util::substitute(r, "locations", join_ints(las));
  r = util::substitute(r, "language", language);
  // last, so braces inside the method are never read as placeholders
  r = util::substitute(r, "method", p.indexed_method);
  p.rendered = std::move(r);
  p.estimated_tokens = estimate_tokens(p.rendered);
  if (p.estimated_tokens > context_budget) throw PromptTooLarge(p.estimated_tokens, context_budget);
  return p;
}

void to_json(json& j, const PromptSpec& p) {
  j = json{{"template_id", p.template_id},     {"method_id", p.method_id},
           {"n_bugs", p.n_bugs},               {"las_indices", p.las_indices},
           {"indexed_method", p.indexed_method}, {"rendered", p.rendered},
           {"estimated_tokens", p.estimated_tokens}};
}

void from_json(const json& j, PromptSpec& p) {
  j.at("template_id").get_to(p.template_id);
  p.method_id = j.value("method_id", std::string{});
  j.at("n_bugs").get_to(p.n_bugs);
  j.at("las_indices").get_to(p.las_indices);
  j.at("indexed_method").get_to(p.indexed_method);
  j.at("rendered").get_to(p.rendered);
  p.estimated_tokens = j.value("estimated_tokens", estimate_tokens(p.rendered));
}

}  // namespace lasmut::generator
